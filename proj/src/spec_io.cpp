#include "ammcalc/spec_io.hpp"

#include "ammcalc/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace ammcalc {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("invalid JSON: ") + e.what());
    }
}

double get_number(const json& j, const char* key, const char* ctx) {
    if (!j.is_object() || !j.contains(key)) {
        throw SpecError(std::string(ctx) + ": missing field '" + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw SpecError(std::string(ctx) + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

const json& get_object(const json& j, const char* key, const char* ctx) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_object()) {
        throw SpecError(std::string(ctx) + ": missing object '" + key + "'");
    }
    return j.at(key);
}

std::vector<double> get_array(const json& j, const char* key, const char* ctx) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw SpecError(std::string(ctx) + ": missing array '" + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) {
            throw SpecError(std::string(ctx) + ": '" + key + "' must hold numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Curve curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw SpecError("curve spec: missing string field 'family'");
    }
    const std::string family = j.at("family").get<std::string>();
    const json empty = json::object();
    const json& params = j.contains("params") ? j.at("params") : empty;
    std::optional<Curve> c;
    try {
        if (family == "constant_product") {
            c = make_constant_product(get_number(params, "c", "constant_product"));
        } else if (family == "constant_power") {
            c = make_constant_power(get_number(params, "c", "constant_power"),
                                    get_number(params, "k", "constant_power"));
        } else if (family == "scaled") {
            c = scale_curve(curve_from_json(get_object(j, "base", "scaled")),
                            get_number(params, "alpha", "scaled"));
        } else if (family == "shifted") {
            c = shift_curve(curve_from_json(get_object(j, "base", "shifted")),
                            get_number(j, "dx", "shifted"), get_number(j, "dy", "shifted"));
        } else if (family == "tabulated") {
            const auto xs = get_array(params, "x", "tabulated");
            const auto ys = get_array(params, "y", "tabulated");
            c = make_tabulated(xs, ys);
        } else {
            throw SpecError("curve spec: unknown family '" + family + "'");
        }
    } catch (const ArgumentError& e) {
        throw SpecError(std::string("curve spec: ") + e.what());
    }
    if (j.contains("domain") && !j.at("domain").is_null()) {
        const json& d = j.at("domain");
        if (!d.is_array() || d.size() != 2 || !d[0].is_number() ||
            !(d[1].is_number() || d[1].is_null())) {
            throw SpecError("curve spec: 'domain' must be [lo, hi|null]");
        }
        const Interval dom{d[0].get<double>(), d[1].is_null() ? kInf : d[1].get<double>()};
        const Interval& cur = c->domain();
        if (dom.lo != cur.lo || dom.hi != cur.hi) {
            try {
                c = restrict_domain(*c, dom);
            } catch (const DomainError& e) {
                throw SpecError(std::string("curve spec: ") + e.what());
            }
        }
    }
    return *c;
}

struct Anchored {
    Curve curve;
    double anchor;
};

Anchored anchored_from_json(const json& j, const char* side) {
    if (!j.is_object()) {
        throw SpecError(std::string("composition spec: '") + side + "' must be an object");
    }
    const double a = get_number(j, "anchor", side);
    if (j.contains("curve")) {
        return {curve_from_json(j.at("curve")), a};
    }
    return {curve_from_json(j), a};
}

}  // namespace

std::string load_spec_text(const std::string& path_or_inline) {
    const auto pos = path_or_inline.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && path_or_inline[pos] == '{') {
        return path_or_inline;
    }
    std::ifstream in(path_or_inline);
    if (!in) {
        throw SpecError("cannot read spec file '" + path_or_inline + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Curve parse_curve_spec(const std::string& text) { return curve_from_json(parse_json(text)); }

std::string curve_to_spec(const Curve& curve) {
    if (curve.spec_json().empty()) {
        throw SpecError(curve.label() + " has no serializable spec");
    }
    return curve.spec_json();
}

CompositionSpec parse_composition_spec(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
        throw SpecError("composition spec: missing string field 'op'");
    }
    const std::string op = j.at("op").get<std::string>();
    CompositionKind kind;
    if (op == "seq") {
        kind = CompositionKind::Sequential;
    } else if (op == "par") {
        kind = CompositionKind::Parallel;
    } else {
        throw SpecError("composition spec: 'op' must be \"seq\" or \"par\", got '" + op + "'");
    }
    if (!j.contains("left") || !j.contains("right")) {
        throw SpecError("composition spec: needs 'left' and 'right'");
    }
    Anchored l = anchored_from_json(j.at("left"), "left");
    Anchored r = anchored_from_json(j.at("right"), "right");
    return CompositionSpec{kind, l.curve, l.anchor, r.curve, r.anchor};
}

PartitionSpec parse_partition_spec(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) {
        throw SpecError("partition spec: expected an object");
    }
    PartitionSpec s;
    if (j.contains("axis")) {
        const std::string ax = j.at("axis").is_string() ? j.at("axis").get<std::string>() : "";
        if (ax == "X" || ax == "x") {
            s.axis = Axis::X;
        } else if (ax == "Y" || ax == "y") {
            s.axis = Axis::Y;
        } else {
            throw SpecError("partition spec: 'axis' must be \"X\" or \"Y\"");
        }
    }
    if (j.contains("anchor")) {
        s.anchor = get_number(j, "anchor", "partition spec");
    }
    if (j.contains("ratio")) {
        s.ratio = get_number(j, "ratio", "partition spec");
    }
    if (j.contains("count")) {
        const json& c = j.at("count");
        if (!c.is_number_integer() || c.get<long long>() < 1) {
            throw SpecError("partition spec: 'count' must be a positive integer");
        }
        s.count = c.get<std::size_t>();
    }
    if (j.contains("tail")) {
        const json& t = j.at("tail");
        if (t.is_boolean()) {
            s.tail = t.get<bool>();
        } else if (t.is_null()) {
            s.tail = false;
        } else if (t.is_number()) {
            s.tail = true;
            s.tail_bound = t.get<double>();
        } else {
            throw SpecError("partition spec: 'tail' must be a boolean, null or a number");
        }
    }
    if (!(s.ratio > 1.0) || !(s.anchor > 0.0)) {
        throw SpecError("partition spec: need anchor > 0 and ratio > 1");
    }
    return s;
}

Partition build_partition(const Curve& curve, const PartitionSpec& spec) {
    Partition P = geometric_partition(curve, spec.axis, spec.anchor, spec.ratio, spec.count,
                                      spec.tail);
    if (spec.tail && spec.tail_bound) {
        P.tail = *spec.tail_bound;
    }
    return P;
}

ValuationDistribution parse_distribution_spec(const std::string& text) {
    try {
        if (text == "uniform") {
            return ValuationDistribution::uniform();
        }
        if (text.rfind("beta:", 0) == 0) {
            const std::string args = text.substr(5);
            const auto comma = args.find(',');
            if (comma == std::string::npos) {
                throw SpecError("distribution spec: expected beta:a1,a2, got '" + text + "'");
            }
            std::size_t used1 = 0, used2 = 0;
            const std::string s1 = args.substr(0, comma);
            const std::string s2 = args.substr(comma + 1);
            const double a1 = std::stod(s1, &used1);
            const double a2 = std::stod(s2, &used2);
            if (used1 != s1.size() || used2 != s2.size()) {
                throw SpecError("distribution spec: malformed beta parameters in '" + text + "'");
            }
            return ValuationDistribution::beta(a1, a2);
        }
        const json j = parse_json(load_spec_text(text));
        if (!j.is_object() || j.value("kind", "") != "tabulated") {
            throw SpecError("distribution spec: JSON form needs \"kind\": \"tabulated\"");
        }
        return ValuationDistribution::tabulated(get_array(j, "points", "distribution"),
                                                get_array(j, "densities", "distribution"));
    } catch (const std::invalid_argument&) {
        throw SpecError("distribution spec: malformed number in '" + text + "'");
    } catch (const std::out_of_range&) {
        throw SpecError("distribution spec: number out of range in '" + text + "'");
    } catch (const ArgumentError& e) {
        throw SpecError(std::string("distribution spec: ") + e.what());
    }
}

}  // namespace ammcalc
