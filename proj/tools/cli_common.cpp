#include "cli_common.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ammcli {

using namespace ammcalc;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    return std::strtod(fmt12(v).c_str(), nullptr);
}

json num(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return round12(v);
}

namespace {

std::string csv_cell(const json& v) {
    if (v.is_null()) {
        return "";
    }
    if (v.is_number_float()) {
        return fmt12(v.get<double>());
    }
    if (v.is_number()) {
        return v.dump();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) {
            q += c;
            if (c == '"') {
                q += '"';
            }
        }
        return q + "\"";
    }
    return s;
}

}  // namespace

std::string Table::csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
    }
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << (i ? "," : "") << csv_cell(r[i]);
        }
        os << "\n";
    }
    return os.str();
}

json Table::to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
        json o = json::object();
        for (std::size_t i = 0; i < columns.size() && i < r.size(); ++i) {
            o[columns[i]] = r[i];
        }
        arr.push_back(o);
    }
    return arr;
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open output file '" + g.out + "'");
    }
    f << text;
}

std::string resolve_format(const Globals& g, const std::string& default_format) {
    const std::string f = g.format.empty() ? default_format : g.format;
    if (f != "csv" && f != "json") {
        throw ConfigError("--format must be csv or json");
    }
    return f;
}

void emit_table(const Globals& g, const Table& t, const std::string& default_format) {
    if (resolve_format(g, default_format) == "csv") {
        emit(g, t.csv());
    } else {
        emit(g, t.to_json().dump(2) + "\n");
    }
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

void require_valid(const Globals& g, const Curve& c) {
    if (g.skip_validate) {
        return;
    }
    const AxiomReport r = validate_axioms(c);
    if (!r.ok()) {
        std::ostringstream os;
        os << c.label() << " fails axiom validation:";
        for (const auto& v : r.violations) {
            os << "\n  " << v.check << " at x=" << fmt12(v.x) << ": " << v.detail;
        }
        os << "\n(use --skip-validate to proceed anyway)";
        throw ConfigError(os.str());
    }
}

Curve load_curve(const Globals& g) {
    if (g.curve.empty()) {
        throw ConfigError("--curve is required");
    }
    Curve c = parse_curve_spec(load_spec_text(g.curve));
    spdlog::debug("loaded curve {}", c.label());
    require_valid(g, c);
    return c;
}

ThreeWayValuation parse_three_way(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto slash = item.find('/');
        try {
            if (slash != std::string::npos) {
                v.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
            } else {
                v.push_back(std::stod(item));
            }
        } catch (const std::exception&) {
            throw ConfigError("malformed three-way valuation '" + s + "'");
        }
    }
    if (v.size() != 3) {
        throw ConfigError("three-way valuation needs three components, got '" + s + "'");
    }
    try {
        return ThreeWayValuation(v[0], v[1], v[2]);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
}

Sampler::Sampler(std::uint64_t seed) : rng_(seed) {}

double Sampler::uniform(double lo, double hi) {
    // 53 random bits; independent of the standard library's distribution code.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

json law_json(const LawResidual& l, double tol) {
    return json{{"name", l.name},     {"lhs", num(l.lhs)},     {"rhs", num(l.rhs)},
                {"residual", num(l.residual)}, {"tolerance", tol}, {"pass", l.pass}};
}

}  // namespace ammcli
