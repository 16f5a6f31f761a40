#include "cli_common.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <sstream>

namespace ammcli {

using namespace ammcalc;

// ---------------------------------------------------------------- measure

int cmd_measure(const Globals& g, int grid, const std::vector<double>& vs,
                const std::vector<double>& v2s) {
    const Curve c = load_curve(g);
    std::vector<double> a = vs;
    std::vector<double> b = v2s;
    if (a.empty() || b.empty()) {
        if (grid < 1) {
            throw ConfigError("--grid must be positive");
        }
        std::vector<double> pts;
        for (int i = 1; i <= grid; ++i) {
            pts.push_back(static_cast<double>(i) / static_cast<double>(grid + 1));
        }
        if (a.empty()) {
            a = pts;
        }
        if (b.empty()) {
            b = pts;
        }
    }
    Table t{{"v", "v2", "divloss", "linslip_x", "linslip_y", "angslip", "load_x", "load_y"}, {}};
    for (double x : a) {
        for (double y : b) {
            const Valuation v(x);
            const Valuation v2(y);
            const double dl = divergence_loss(c, v, v2);
            json lx = nullptr, ly = nullptr, ldx = nullptr, ldy = nullptr;
            if (y <= x) {
                const double ls = linear_slippage_x(c, v, v2);
                lx = num(ls);
                ldx = num(dl * ls);
            }
            if (y >= x) {
                const double ls = linear_slippage_y(c, v, v2);
                ly = num(ls);
                ldy = num(dl * ls);
            }
            t.rows.push_back({num(x), num(y), num(dl), lx, ly, num(angular_slippage(v, v2)), ldx, ldy});
        }
    }
    emit_table(g, t, "csv");
    return kOk;
}

// ---------------------------------------------------------------- expect

int cmd_expect(const Globals& g, double v0, const std::vector<double>& alphas,
               const std::string& dist, const std::string& measure, bool capitalization) {
    const Curve c = load_curve(g);
    const Valuation v(v0);
    if (capitalization || !dist.empty()) {
        const ValuationDistribution p =
            parse_distribution_spec(dist.empty() ? std::string("uniform") : dist);
        Table t{{"distribution", "measure", "v0", "value", "error"}, {}};
        if (capitalization) {
            const Expectation e = expected_capitalization(c, p);
            t.rows.push_back({p.label(), "capitalization", nullptr, num(e.value), num(e.error)});
        } else {
            const MeasureKind k = parse_measure_kind(measure);
            const Expectation e = expected_measure(c, v, p, k);
            t.rows.push_back({p.label(), to_string(k), num(v0), num(e.value), num(e.error)});
        }
        emit_table(g, t, "csv");
        return kOk;
    }
    if (measure != "load") {
        throw ConfigError("the surface covers expected load only; use --dist for " + measure);
    }
    if (alphas.empty()) {
        throw ConfigError("--alphas must not be empty");
    }
    spdlog::info("expected-load surface: {}x{} cells on {} worker(s)", alphas.size(),
                 alphas.size(), g.jobs);
    const auto cells = expected_load_surface(c, v, alphas, g.jobs);
    Table t{{"alpha1", "alpha2", "expected_load"}, {}};
    for (const auto& cell : cells) {
        t.rows.push_back({num(cell.alpha1), num(cell.alpha2), num(cell.expected_load)});
    }
    emit_table(g, t, "csv");
    return kOk;
}

// ---------------------------------------------------------------- compose

namespace {

json state_json(State s) { return json::array({num(s.x), num(s.y)}); }

json interval_json(const Interval& d) {
    return json::array({num(d.lo), d.bounded_above() ? num(d.hi) : json(nullptr)});
}

}  // namespace

int cmd_compose(const Globals& g, const ComposeArgs& args) {
    std::optional<CompositionSpec> spec;
    if (!args.spec.empty()) {
        spec = parse_composition_spec(load_spec_text(args.spec));
    } else {
        const Curve left = load_curve(g);
        const Curve right = args.right.empty() ? left : parse_curve_spec(load_spec_text(args.right));
        CompositionKind k;
        if (args.op == "seq") {
            k = CompositionKind::Sequential;
        } else if (args.op == "par") {
            k = CompositionKind::Parallel;
        } else {
            throw ConfigError("--op must be seq or par");
        }
        spec = CompositionSpec{k, left, args.a, right, args.b};
    }
    require_valid(g, spec->left);
    require_valid(g, spec->right);

    const bool seq = spec->op == CompositionKind::Sequential;
    const ComposedCurve comp = seq ? sequential_compose(spec->left, spec->left_anchor, spec->right,
                                                        spec->right_anchor)
                                   : parallel_compose(spec->left, spec->left_anchor, spec->right,
                                                      spec->right_anchor);
    const Curve& h = comp.curve();

    json out;
    out["op"] = seq ? "seq" : "par";
    out["label"] = h.label();
    out["domain"] = interval_json(h.domain());
    out["left_anchor"] = state_json(comp.left_anchor());
    out["right_anchor"] = state_json(comp.right_anchor());

    std::vector<double> queries = args.queries;
    if (queries.empty()) {
        queries.push_back(seq ? spec->left_anchor : 0.0);
    }
    json q = json::array();
    for (double x : queries) {
        if (seq) {
            q.push_back({{"x", num(x)}, {"h", num(h.eval(x))}, {"dh", num(h.deriv(x))}});
        } else {
            const double X = comp.anchor() + x;
            q.push_back({{"deposit", num(x)},
                         {"output", num(comp.output(x))},
                         {"split", num(comp.split(x))},
                         {"slope", num(h.deriv(X))}});
        }
    }
    out["queries"] = q;

    LawReport rep;
    json laws = json::array();
    json findings = json::array();
    if (seq) {
        const ThreeWayValuation V =
            args.V.empty() ? ThreeWayValuation(1.0 / 3, 1.0 / 3, 1.0 / 3) : parse_three_way(args.V);
        const ThreeWayValuation V2 =
            args.V2.empty() ? ThreeWayValuation(0.5, 0.3, 0.2) : parse_three_way(args.V2);
        const SequentialLawReport s = check_sequential_laws(
            spec->left, spec->left_anchor, spec->right, spec->right_anchor, V, V2, g.tol);
        out["realized_valuation"] = json::array({num(s.realized.v1()), num(s.realized.v2()),
                                                 num(s.realized.v3())});
        out["staged"] = json{{"a", num(s.a)}, {"b", num(s.b)}, {"a_new", num(s.a_new)},
                             {"b_new", num(s.b_new)}};
        out["cross_terms"] = json::array({num(s.cross_ab), num(s.cross_ba)});
        rep = s;
    } else {
        const ParallelLawReport p =
            check_parallel_laws(spec->left, spec->left_anchor, spec->right, spec->right_anchor,
                                Valuation(args.v), Valuation(args.v2), g.tol);
        out["staged"] = json{{"a", num(p.a)}, {"b", num(p.b)}};
        out["cross_terms"] = num(p.cross);
        rep = p;
    }
    for (const auto& l : rep.laws) {
        (l.exact ? laws : findings).push_back(law_json(l, g.tol));
    }
    out["laws"] = laws;
    out["findings"] = findings;
    out["notes"] = rep.notes;
    out["pass"] = rep.ok();

    if (resolve_format(g, "json") == "json") {
        emit_json(g, out);
    } else {
        Table t{{"record", "name", "x", "value", "slope", "residual", "pass"}, {}};
        for (const auto& e : q) {
            if (seq) {
                t.rows.push_back({"query", "h", e["x"], e["h"], e["dh"], nullptr, nullptr});
            } else {
                t.rows.push_back(
                    {"query", "output", e["deposit"], e["output"], e["slope"], nullptr, nullptr});
            }
        }
        for (const auto& l : rep.laws) {
            t.rows.push_back({l.exact ? "law" : "finding", l.name, nullptr, num(l.lhs), nullptr,
                              num(l.residual), l.pass});
        }
        emit(g, t.csv());
    }
    return rep.ok() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- adjust

int cmd_adjust(const Globals& g, const AdjustArgs& args) {
    const Curve c = load_curve(g);
    State st = c.state_at(args.x);
    if (!args.state.empty()) {
        std::stringstream ss(args.state);
        std::string xs, ys;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, ys)) {
            throw ConfigError("--state must be x,y");
        }
        try {
            st = State{std::stod(xs), std::stod(ys)};
        } catch (const std::exception&) {
            throw ConfigError("--state must be x,y");
        }
    }
    json out;
    out["curve"] = c.label();
    out["state"] = state_json(st);
    if (!args.p_tilde.empty()) {
        const ValuationDistribution p = parse_distribution_spec(args.p);
        const ValuationDistribution pt = parse_distribution_spec(args.p_tilde);
        const Replacement r = optimize_replacement(c, st.x, p, pt);
        out["mode"] = "distribution_change";
        out["p"] = p.label();
        out["p_tilde"] = pt.label();
        out["k"] = num(r.k);
        out["shift"] = num(r.shift);
        out["c"] = num(r.c);
        out["objective"] = num(r.objective);
        out["at_scan_bound"] = r.at_scan_bound;
        out["replacement"] = json::parse(curve_to_spec(r.curve));
    } else {
        if (!args.v) {
            throw ConfigError("adjust needs --v (pseudo-arbitrage) or --p-tilde (replacement)");
        }
        const Valuation v(*args.v);
        const RestrictedCurve r = pseudo_arbitrage_shift(c, st, v);
        out["mode"] = "pseudo_arbitrage";
        out["v"] = num(v.value());
        out["dx"] = num(r.dx);
        out["dy"] = num(r.dy);
        out["active_domain"] = interval_json(r.active_domain());
        out["inaccessible_x"] = num(r.inaccessible_x());
        out["inaccessible_y"] = num(r.inaccessible_y());
        out["profit_before"] = num(arbitrage_profit(c, st, v));
        out["profit_after"] = num(arbitrage_profit(r.curve, st, v));
        out["shifted"] = json::parse(curve_to_spec(r.curve));
    }
    if (resolve_format(g, "json") == "json") {
        emit_json(g, out);
    } else {
        Table t{{"field", "value"}, {}};
        for (const auto& [k, val] : out.items()) {
            t.rows.push_back({k, val.is_structured() ? json(val.dump()) : val});
        }
        emit(g, t.csv());
    }
    return kOk;
}

// ---------------------------------------------------------------- partition

int cmd_partition(const Globals& g, const PartitionArgs& args) {
    const Curve c = load_curve(g);
    json out;
    out["curve"] = c.label();
    int code = kOk;
    if (args.conservation) {
        const Conservation k = conservation_at_fixed_point(c, args.ratio, args.count);
        out["mode"] = "conservation";
        out["ratio"] = num(args.ratio);
        out["count"] = args.count;
        out["x_star"] = num(k.x_star);
        out["l_x"] = num(k.l_x);
        out["l_y"] = num(k.l_y);
        out["sum"] = num(k.sum);
        out["target"] = num(k.target);
        out["tail_error"] = num(k.tail_error);
        out["conserved"] = std::abs(k.sum - k.target) <= 1e-3;
    } else {
        PartitionSpec s;
        if (!args.spec.empty()) {
            s = parse_partition_spec(load_spec_text(args.spec));
        } else {
            if (args.axis == "X" || args.axis == "x") {
                s.axis = Axis::X;
            } else if (args.axis == "Y" || args.axis == "y") {
                s.axis = Axis::Y;
            } else {
                throw ConfigError("--axis must be X or Y");
            }
            s.anchor = args.anchor;
            s.ratio = args.ratio;
            s.count = args.count;
            s.tail = !args.no_tail;
        }
        const Partition P = build_partition(c, s);
        const PartitionBounds b = check_partition_bounds(c, P);
        out["mode"] = "partition";
        out["axis"] = s.axis == Axis::X ? "X" : "Y";
        out["anchor"] = num(s.anchor);
        out["points"] = P.points.size();
        out["total"] = num(b.total.total);
        out["tail_term"] = num(b.total.tail_term);
        out["tail_error"] = num(b.total.tail_error);
        out["lower"] = num(b.lower);
        out["upper"] = num(b.upper);
        out["terms_nonnegative"] = b.terms_nonnegative;
        out["upper_ok"] = b.upper_ok;
        out["lower_ok"] = b.lower_ok;
        code = b.proven_ok() ? kOk : kVerifyFailed;
    }
    if (resolve_format(g, "json") == "json") {
        emit_json(g, out);
    } else {
        Table t{{"field", "value"}, {}};
        for (const auto& [k, val] : out.items()) {
            t.rows.push_back({k, val});
        }
        emit(g, t.csv());
    }
    return code;
}

}  // namespace ammcli
