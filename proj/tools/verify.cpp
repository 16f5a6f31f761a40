#include "cli_common.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <numbers>

namespace ammcli {

using namespace ammcalc;

namespace {

struct Check {
    std::string name;
    double tolerance = 0.0;
    double max_residual = 0.0;
    int samples = 0;
    bool pass = true;
    std::string detail;
    std::optional<double> value;

    void add(double residual) {
        ++samples;
        if (!(residual <= max_residual)) {
            max_residual = std::isnan(residual) ? kInf : residual;
        }
        if (!(residual <= tolerance)) {
            pass = false;
        }
    }

    json to_json() const {
        json j{{"name", name},
               {"max_residual", num(max_residual)},
               {"tolerance", tolerance},
               {"samples", samples},
               {"pass", pass}};
        if (!detail.empty()) {
            j["detail"] = detail;
        }
        if (value) {
            j["value"] = num(*value);
        }
        return j;
    }
};

class Suite {
public:
    void run(const std::string& name, double tol, const std::function<void(Check&)>& body) {
        Check c;
        c.name = name;
        c.tolerance = tol;
        try {
            body(c);
        } catch (const AmmError& e) {
            c.pass = false;
            c.detail = e.what();
        }
        spdlog::info("{}: max residual {} ({})", name, fmt12(c.max_residual),
                     c.pass ? "pass" : "FAIL");
        checks_.push_back(c);
    }
    void finding(json j) { findings_.push_back(std::move(j)); }
    void note(const std::string& s) { notes_.push_back(s); }

    bool pass() const {
        for (const auto& c : checks_) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }
    json laws() const {
        json a = json::array();
        for (const auto& c : checks_) {
            a.push_back(c.to_json());
        }
        return a;
    }
    const std::vector<Check>& checks() const { return checks_; }
    const json& findings() const { return findings_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    std::vector<Check> checks_;
    json findings_ = json::array();
    std::vector<std::string> notes_;
};

ThreeWayValuation random_three_way(Sampler& s) {
    const double a = s.uniform(0.2, 1.0);
    const double b = s.uniform(0.2, 1.0);
    const double c = s.uniform(0.2, 1.0);
    const double t = a + b + c;
    return ThreeWayValuation(a / t, b / t, c / t);
}

std::pair<double, double> random_pair(Sampler& s) {
    for (;;) {
        const double v = s.uniform(0.05, 0.95);
        const double w = s.uniform(0.05, 0.95);
        if (std::abs(v - w) >= 0.02) {
            return {v, w};
        }
    }
}

}  // namespace

int cmd_verify(const Globals& g, int samples) {
    Globals lenient = g;
    lenient.skip_validate = true;
    const Curve c = load_curve(lenient);
    Sampler rng(g.seed);
    Suite suite;

    const AxiomReport ax = validate_axioms(c);
    json axioms{{"continuity_ok", ax.continuity_ok},
                {"expressivity_ok", ax.expressivity_ok},
                {"convexity_ok", ax.convexity_ok},
                {"boundary_ok", ax.boundary_ok}};
    json viol = json::array();
    for (const auto& v : ax.violations) {
        viol.push_back({{"x", num(v.x)}, {"check", v.check}, {"detail", v.detail}});
    }
    axioms["violations"] = viol;
    axioms["notes"] = ax.notes;

    const bool proceed = ax.ok() || g.skip_validate;
    if (!proceed) {
        suite.note("axiom validation failed; remaining checks skipped");
    } else {
        suite.run("stable_point_slope", 1e-8, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                const Valuation v(rng.uniform(0.01, 0.99));
                k.add(rel_diff(c.deriv(stable_point(c, v)), -v.rate()));
            }
        });
        suite.run("stable_point_roundtrip", 1e-9, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                const Valuation v(rng.uniform(0.01, 0.99));
                k.add(std::abs(valuation_of(c, stable_point(c, v)).value() - v.value()));
            }
        });
        suite.run("inverse_roundtrip", 1e-9, [&](Check& k) {
            for (double x : default_grid(c, 21)) {
                k.add(rel_diff(c.inverse(c.eval(x)), x));
            }
        });
        suite.run("divloss_nonnegative", 0.0, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                const auto [v, w] = random_pair(rng);
                k.add(std::max(0.0, -divergence_loss(c, Valuation(v), Valuation(w))));
            }
        });
        suite.run("linslip_divloss_identity", 1e-10, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                auto [v, w] = random_pair(rng);
                if (w > v) {
                    std::swap(v, w);
                }
                const double ls = linear_slippage_x(c, Valuation(v), Valuation(w));
                const double dl = divergence_loss(c, Valuation(w), Valuation(v));
                k.add(rel_diff(ls, (1.0 - w) / (1.0 - v) * dl));
            }
        });
        suite.run("angslip_additive", 1e-12, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                double t[3] = {rng.uniform(0.001, 0.999), rng.uniform(0.001, 0.999),
                               rng.uniform(0.001, 0.999)};
                std::sort(t, t + 3);
                const Valuation a(t[2]), b(t[1]), d(t[0]);
                k.add(std::abs(angular_slippage(a, d) - angular_slippage(a, b) -
                               angular_slippage(b, d)));
            }
        });
        suite.run("angslip_curve_geometry", 1e-9, [&](Check& k) {
            for (int i = 0; i < samples; ++i) {
                const auto [v, w] = random_pair(rng);
                const Valuation a(v), b(w);
                k.add(std::abs(angular_slippage_trade(c, stable_point(c, a), stable_point(c, b)) -
                               angular_slippage(a, b)));
            }
        });
        suite.run("angslip_quarter_turn", 1e-3, [&](Check& k) {
            const double eps = 1e-6;
            k.value = angular_slippage(Valuation(1.0 - eps), Valuation(eps));
            k.add(std::abs(*k.value - std::numbers::pi / 2));
        });
        suite.run("fixed_point", 1e-9, [&](Check& k) {
            const double xs = fixed_point(c);
            k.add(std::abs(c.eval(xs) - xs) / std::max(1.0, xs));
        });

        const int law_samples = std::max(1, samples / 2);
        json seq_alt{{"name", "seq_alt_forms"}, {"max_residual", json::object()}};
        suite.run("seq_laws_self", g.tol, [&](Check& k) {
            std::map<std::string, double> alt;
            for (int i = 0; i < law_samples; ++i) {
                const ThreeWayValuation V = random_three_way(rng);
                const ThreeWayValuation V2 = random_three_way(rng);
                const double a = stable_point(c, induced_pairwise(V).v12);
                const SequentialLawReport r = check_sequential_laws(c, a, c, a, V, V2, g.tol);
                for (const auto& l : r.laws) {
                    if (l.exact) {
                        k.add(l.residual);
                    } else {
                        alt[l.name] = std::max(alt[l.name], l.residual);
                    }
                }
            }
            for (const auto& [n, r] : alt) {
                seq_alt["max_residual"][n] = num(r);
            }
        });
        if (!seq_alt["max_residual"].empty()) {
            seq_alt["note"] =
                "weightings that differ from the exact sequential identities; reported only";
            suite.finding(seq_alt);
        }
        const Curve doubled = scale_curve(c, 2.0);
        for (const auto& [name, other] :
             std::vector<std::pair<std::string, Curve>>{{"par_laws_self", c},
                                                        {"par_laws_scaled", doubled}}) {
            suite.run(name, g.tol, [&](Check& k) {
                for (int i = 0; i < law_samples; ++i) {
                    const auto [v, w] = random_pair(rng);
                    const ParallelLawReport r = check_parallel_laws(
                        c, 1.0, other, 1.0, Valuation(v), Valuation(w), g.tol);
                    for (const auto& l : r.laws) {
                        k.add(l.residual);
                    }
                }
            });
        }

        if (c.has_default_domain()) {
            int lower_violations = 0;
            int bound_samples = 0;
            suite.run("partition_upper_bound", 1e-9, [&](Check& k) {
                for (int i = 0; i < law_samples; ++i) {
                    const double anchor = std::exp(rng.uniform(std::log(0.2), std::log(5.0)));
                    const double ratio = rng.uniform(1.5, 4.0);
                    const Axis axis = i % 2 == 0 ? Axis::X : Axis::Y;
                    const PartitionBounds b =
                        check_partition_bounds(c, geometric_partition(c, axis, anchor, ratio, 30));
                    k.add(b.terms_nonnegative ? 0.0 : 1.0);
                    k.add(std::max(0.0, b.total.total - b.upper) / std::max(1.0, b.upper));
                    ++bound_samples;
                    lower_violations += b.lower_ok ? 0 : 1;
                }
            });
            suite.finding({{"name", "partition_lower_bound"},
                           {"violations", lower_violations},
                           {"samples", bound_samples},
                           {"note", "cap(v) lower bound on partition totals; reported only"}});
            try {
                const Conservation k = conservation_at_fixed_point(c);
                suite.finding({{"name", "partition_conservation"},
                               {"l_x", num(k.l_x)},
                               {"l_y", num(k.l_y)},
                               {"sum", num(k.sum)},
                               {"target", num(k.target)},
                               {"holds", std::abs(k.sum - k.target) <= 1e-3}});
            } catch (const AmmError& e) {
                suite.note(std::string("partition conservation skipped: ") + e.what());
            }
            try {
                suite.finding({{"name", "divloss_unbounded_probe"},
                               {"x", 1e-4},
                               {"divloss", num(divergence_loss_trade(c, 1e-4, 1e-4 + 1.0))},
                               {"linslip", num(linear_slippage_x_trade(c, 1e-4, 1e-4 + 1.0))}});
            } catch (const AmmError& e) {
                suite.note(std::string("unboundedness probe skipped: ") + e.what());
            }
        } else {
            suite.note("partition checks skipped: restricted domain " + c.domain().str());
        }
    }

    const bool ok = ax.ok() && suite.pass();
    json report{{"curve", c.label()},
                {"seed", g.seed},
                {"axioms", axioms},
                {"laws", suite.laws()},
                {"findings", suite.findings()},
                {"notes", suite.notes()},
                {"pass", ok}};
    if (resolve_format(g, "json") == "json") {
        emit_json(g, report);
    } else {
        Table t{{"check", "max_residual", "tolerance", "pass", "detail"}, {}};
        for (const char* n : {"continuity", "expressivity", "convexity"}) {
            std::string detail;
            bool pass = true;
            for (const auto& v : ax.violations) {
                if (v.check == n) {
                    pass = false;
                    if (detail.empty()) {
                        detail = v.detail;
                    }
                }
            }
            t.rows.push_back({std::string("axiom_") + n, nullptr, nullptr, pass, detail});
        }
        for (const auto& k : suite.checks()) {
            t.rows.push_back({k.name, num(k.max_residual), k.tolerance, k.pass, k.detail});
        }
        emit(g, t.csv());
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace ammcli
