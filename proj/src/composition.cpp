#include "ammcalc/composition.hpp"

#include "ammcalc/errors.hpp"
#include "ammcalc/measures.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ammcalc {

using nlohmann::json;

// ---------------------------------------------------------------- valuations

ThreeWayValuation::ThreeWayValuation(double v1, double v2, double v3) {
    const double s = v1 + v2 + v3;
    if (!(v1 > 0.0 && v2 > 0.0 && v3 > 0.0) || !std::isfinite(s)) {
        throw ArgumentError("three-way valuation components must be positive");
    }
    if (std::abs(s - 1.0) > 1e-6) {
        std::ostringstream os;
        os.precision(12);
        os << "three-way valuation must sum to 1, got " << s;
        throw ArgumentError(os.str());
    }
    v1_ = v1 / s;
    v2_ = v2 / s;
    v3_ = v3 / s;
}

PairwiseValuations induced_pairwise(const ThreeWayValuation& V) {
    return PairwiseValuations{Valuation(V.v1() / (V.v1() + V.v2())),
                              Valuation(V.v2() / (V.v2() + V.v3())),
                              Valuation(V.v1() / (V.v1() + V.v3()))};
}

ThreeWayValuation from_pairwise(Valuation v12, Valuation v23) {
    const double r1 = v12.value() / v12.complement();
    const double r2 = v23.value() / v23.complement();
    const double v3 = 1.0 / (1.0 + r2 + r1 * r2);
    const double v2 = r2 * v3;
    const double v1 = r1 * v2;
    return ThreeWayValuation(v1, v2, v3);
}

// ---------------------------------------------------------------- composed curve

ComposedCurve::ComposedCurve(CompositionKind kind, Curve left, double a, Curve right, double b,
                             Curve curve)
    : kind_(kind),
      left_(std::move(left)),
      right_(std::move(right)),
      a_(a),
      b_(b),
      curve_(std::move(curve)) {}

double ComposedCurve::anchor() const { return kind_ == CompositionKind::Sequential ? a_ : a_ + b_; }

double ComposedCurve::split(double d) const {
    if (kind_ != CompositionKind::Parallel) {
        throw ArgumentError("split: only defined for parallel compositions");
    }
    return optimal_split(left_, a_, right_, b_, d);
}

double ComposedCurve::output(double d) const {
    if (kind_ != CompositionKind::Parallel) {
        throw ArgumentError("output: only defined for parallel compositions");
    }
    const double t = split(d);
    return left_.eval(a_) - left_.eval(a_ + t * d) + right_.eval(b_) -
           right_.eval(b_ + (1.0 - t) * d);
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string composition_spec(const char* op, const Curve& A, double a, const Curve& B, double b) {
    if (A.spec_json().empty() || B.spec_json().empty()) {
        return {};
    }
    return json{{"op", op},
                {"left", {{"curve", json::parse(A.spec_json())}, {"anchor", a}}},
                {"right", {{"curve", json::parse(B.spec_json())}, {"anchor", b}}}}
        .dump();
}

}  // namespace

ComposedCurve sequential_compose(const Curve& A, double a, const Curve& B, double b) {
    const double fa = A.eval(a);
    B.eval(b);
    const double K = b + fa;

    // h is defined where u = K - f(x) stays inside B's domain.
    Interval dom = A.domain();
    const Interval& bd = B.domain();
    const double c_lo = K - bd.lo;  // need f(x) < c_lo
    try {
        dom.lo = std::max(dom.lo, A.inverse(c_lo, kTightTol));
    } catch (const RangeError&) {
        // f never reaches c_lo inside A's domain: no constraint.
    }
    if (bd.bounded_above()) {
        const double c_hi = K - bd.hi;  // need f(x) > c_hi
        if (c_hi > 0.0) {
            try {
                dom.hi = std::min(dom.hi, A.inverse(c_hi, kTightTol));
            } catch (const RangeError&) {
            }
        }
    }
    if (!dom.contains(a)) {
        throw DomainError("sequential_compose: anchor outside the composed domain " + dom.str());
    }

    Curve::Parts p;
    p.f = [A, B, K](double x) { return B.eval(K - A.eval(x)); };
    p.df = [A, B, K](double x) { return -B.deriv(K - A.eval(x)) * A.deriv(x); };
    p.d2f = [A, B, K](double x) {
        const double u = K - A.eval(x);
        const double d1 = A.deriv(x);
        return B.deriv2(u) * d1 * d1 - B.deriv(u) * A.deriv2(x);
    };
    p.inverse = [A, B, K](double z) { return A.inverse(K - B.inverse(z)); };
    // D_h(x, r) = D_g(u_x, u_r) - g'(u_r) D_f(x, r)
    p.gap = [A, B, K](double x, double r) {
        const double ux = K - A.eval(x);
        const double ur = K - A.eval(r);
        return B.gap(ux, ur) - B.deriv(ur) * A.gap(x, r);
    };
    p.domain = dom;
    p.label = "seq(" + A.label() + "@" + num(a) + ", " + B.label() + "@" + num(b) + ")";
    p.spec_json = composition_spec("seq", A, a, B, b);
    return ComposedCurve(CompositionKind::Sequential, A, a, B, b, Curve(std::move(p)));
}

double optimal_split(const Curve& A, double a, const Curve& B, double b, double delta) {
    A.eval(a);
    B.eval(b);
    if (!std::isfinite(delta)) {
        throw ArgumentError("optimal_split: non-finite deposit");
    }
    if (delta == 0.0) {
        const double sa = A.deriv(a);
        const double sb = B.deriv(b);
        if (rel_diff(sa, sb) <= 1e-12) {
            const double ca = A.deriv2(a);
            const double cb = B.deriv2(b);
            return cb / (ca + cb);
        }
        // The steeper curve pays more per unit and takes the first deposit.
        return sa > sb ? 0.0 : 1.0;
    }
    const Interval& da = A.domain();
    const Interval& db = B.domain();
    // Derivative of f(a + t d) + g(b + (1-t) d) in t, increasing by convexity.
    // Positions outside a domain act as an infinite barrier.
    const RealFn phi = [&](double t) {
        const double xa = a + t * delta;
        const double xb = b + (1.0 - t) * delta;
        const bool ina = da.contains(xa);
        const bool inb = db.contains(xb);
        if (!ina && !inb) {
            throw DomainError("optimal_split: deposit exceeds both domains");
        }
        if (!ina) {
            return kInf;
        }
        if (!inb) {
            return -kInf;
        }
        return delta * (A.deriv(xa) - B.deriv(xb));
    };
    if (phi(0.0) >= 0.0) {
        return 0.0;
    }
    if (phi(1.0) <= 0.0) {
        return 1.0;
    }
    const double t = bisect_increasing(phi, 0.0, 1.0, 2000);
    if (!da.contains(a + t * delta) || !db.contains(b + (1.0 - t) * delta)) {
        throw DomainError("optimal_split: deposit " + num(delta) +
                          " leaves no resolvable split inside both domains");
    }
    return t;
}

ComposedCurve parallel_compose(const Curve& A, double a, const Curve& B, double b) {
    A.eval(a);
    B.eval(b);
    const double base = a + b;

    struct Split {
        double t, xa, xb;
    };
    auto locate = [A, a, B, b, base](double X) {
        const double d = X - base;
        const double t = optimal_split(A, a, B, b, d);
        return Split{t, a + t * d, b + (1.0 - t) * d};
    };
    auto slope = [A, B](const Split& s) {
        if (s.t <= 0.0) {
            return B.deriv(s.xb);
        }
        if (s.t >= 1.0) {
            return A.deriv(s.xa);
        }
        return 0.5 * (A.deriv(s.xa) + B.deriv(s.xb));
    };

    Curve::Parts p;
    p.f = [A, B, locate](double X) {
        const Split s = locate(X);
        return A.eval(s.xa) + B.eval(s.xb);
    };
    p.df = [locate, slope](double X) { return slope(locate(X)); };
    p.d2f = [A, B, locate](double X) {
        const Split s = locate(X);
        if (s.t <= 0.0) {
            return B.deriv2(s.xb);
        }
        if (s.t >= 1.0) {
            return A.deriv2(s.xa);
        }
        return 1.0 / (1.0 / A.deriv2(s.xa) + 1.0 / B.deriv2(s.xb));
    };
    // Split the tangent gap across the components; the correction terms vanish
    // whenever the reference point has a common slope.
    p.gap = [A, B, locate, slope](double X, double R) {
        const Split sx = locate(X);
        const Split sr = locate(R);
        const double s = slope(sr);
        return A.gap(sx.xa, sr.xa) + (A.deriv(sr.xa) - s) * (sx.xa - sr.xa) +
               B.gap(sx.xb, sr.xb) + (B.deriv(sr.xb) - s) * (sx.xb - sr.xb);
    };
    p.domain = Interval{A.domain().lo + B.domain().lo, A.domain().hi + B.domain().hi};
    p.label = "par(" + A.label() + "@" + num(a) + ", " + B.label() + "@" + num(b) + ")";
    p.spec_json = composition_spec("par", A, a, B, b);
    return ComposedCurve(CompositionKind::Parallel, A, a, B, b, Curve(std::move(p)));
}

// ---------------------------------------------------------------- law checks

bool LawReport::ok() const {
    return std::all_of(laws.begin(), laws.end(),
                       [](const LawResidual& l) { return !l.exact || l.pass; });
}

double LawReport::max_residual() const {
    double m = 0.0;
    for (const auto& l : laws) {
        if (l.exact) {
            m = std::max(m, l.residual);
        }
    }
    return m;
}

const LawResidual& LawReport::find(const std::string& name) const {
    for (const auto& l : laws) {
        if (l.name == name) {
            return l;
        }
    }
    throw ArgumentError("no law named '" + name + "' in report");
}

namespace {

LawResidual make_law(std::string name, double lhs, double rhs, double floor, double tol,
                     bool exact = true) {
    LawResidual r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
    r.exact = exact;
    r.pass = r.residual <= tol;
    return r;
}

// (1 - psi(x2)) D(x2, x) for either direction.
double linslip_x_raw(const Curve& c, double x, double x2) {
    return detail::complement_at(c, x2) * c.gap(x2, x);
}

void note_restage(std::vector<std::string>& notes, const char* which, double given,
                  double staged) {
    if (rel_diff(given, staged) > 1e-12) {
        notes.push_back(std::string(which) + " re-staged from " + num(given) + " to " +
                        num(staged));
    }
}

}  // namespace

SequentialLawReport check_sequential_laws(const Curve& A, double a, const Curve& B, double b,
                                          const ThreeWayValuation& V,
                                          const ThreeWayValuation& V2, double tol) {
    SequentialLawReport rep;
    const PairwiseValuations P = induced_pairwise(V);
    const PairwiseValuations P2 = induced_pairwise(V2);

    double xa, xb, xn;
    try {
        xa = stable_point(A, P.v12);
        xb = stable_point(B, P.v23);
    } catch (const ExpressivityError& e) {
        throw StagingError(std::string("cannot stage components for V: ") + e.what());
    }
    note_restage(rep.notes, "left anchor", a, xa);
    note_restage(rep.notes, "right anchor", b, xb);
    const ComposedCurve comp = sequential_compose(A, xa, B, xb);
    const Curve& h = comp.curve();
    try {
        xn = stable_point(h, P2.v13);
    } catch (const ExpressivityError& e) {
        throw StagingError(std::string("composite cannot reach v13 of V2: ") + e.what());
    }
    const double bn = xb + A.eval(xa) - A.eval(xn);
    rep.a = xa;
    rep.b = xb;
    rep.a_new = xn;
    rep.b_new = bn;
    rep.realized = from_pairwise(valuation_of(A, xn), valuation_of(B, bn));
    const double w1 = rep.realized.v1();
    const double w2 = rep.realized.v2();
    const double w3 = rep.realized.v3();
    if (rel_diff(w1, V2.v1()) > 1e-9 || rel_diff(w3, V2.v3()) > 1e-9) {
        rep.notes.push_back("realized valuation (" + num(w1) + ", " + num(w2) + ", " + num(w3) +
                            ") differs from the requested one; only v13 is imposed");
    }

    const double dl_a = divergence_loss_trade(A, xa, xn);
    const double dl_b = divergence_loss_trade(B, xb, bn);
    const double ls_a = linslip_x_raw(A, xa, xn);
    const double ls_b = linslip_x_raw(B, xb, bn);
    const double dl_h = divergence_loss(h, P.v13, P2.v13);
    const double ls_h = detail::linslip_x_formula(h, P.v13, P2.v13);
    const double an_h = angular_slippage_trade(h, xa, xn);

    const double scale = std::max(1.0, P.v13.dot(h.state_at(xa)));
    const double floor = 1e-13 * scale;

    const double wa = (1.0 - w3) / (1.0 - w2);
    const double wb = (1.0 - w1) / (1.0 - w2);
    const double ua = V.v2() * w3 / (V.v3() * w2) * wa;
    const double ub = wb;
    rep.laws.push_back(make_law("seq_divloss", dl_h, wa * dl_a + wb * dl_b, floor, tol));
    rep.laws.push_back(
        make_law("seq_divloss_alt", dl_h, w3 / w2 * dl_a + w1 / w2 * dl_b, floor, tol, false));
    rep.laws.push_back(make_law("seq_linslip", ls_h, ua * ls_a + ub * ls_b, floor, tol));
    rep.laws.push_back(
        make_law("seq_linslip_alt", ls_h, wa * ls_a + wb * ls_b, floor, tol, false));
    rep.laws.push_back(
        make_law("seq_angslip", an_h, angular_slippage(P.v13, P2.v13), 1e-13, tol));

    rep.cross_ab = wa * ub * dl_a * ls_b;
    rep.cross_ba = wb * ua * dl_b * ls_a;
    const double load_rhs =
        wa * ua * dl_a * ls_a + wb * ub * dl_b * ls_b + rep.cross_ab + rep.cross_ba;
    rep.laws.push_back(make_law("seq_load", dl_h * ls_h, load_rhs, floor * floor, tol));
    const double ka = w3 * (1.0 - w3) / (w2 * (1.0 - w2));
    const double kb = w1 * (1.0 - w1) / (w2 * (1.0 - w2));
    const double load_alt = ka * (dl_a * ls_a + dl_a * ls_b) + kb * (dl_b * ls_b + dl_b * ls_a);
    rep.laws.push_back(
        make_law("seq_load_alt", dl_h * ls_h, load_alt, floor * floor, tol, false));
    return rep;
}

ParallelLawReport check_parallel_laws(const Curve& A, double a, const Curve& B, double b,
                                      Valuation v, Valuation v2, double tol,
                                      const std::vector<double>& alphas) {
    ParallelLawReport rep;
    double xa, xb;
    try {
        xa = stable_point(A, v);
        xb = stable_point(B, v);
    } catch (const ExpressivityError& e) {
        throw StagingError(std::string("cannot stage components for v: ") + e.what());
    }
    note_restage(rep.notes, "left anchor", a, xa);
    note_restage(rep.notes, "right anchor", b, xb);
    rep.a = xa;
    rep.b = xb;
    const ComposedCurve comp = parallel_compose(A, xa, B, xb);
    const Curve& H = comp.curve();

    double xh, xa2, xb2;
    try {
        xh = stable_point(H, v2);
        xa2 = stable_point(A, v2);
        xb2 = stable_point(B, v2);
    } catch (const ExpressivityError& e) {
        throw StagingError(std::string("cannot reach v2: ") + e.what());
    }
    const double dl_h = divergence_loss(H, v, v2);
    const double ls_h = detail::linslip_x_formula(H, v, v2);
    const double an_h = angular_slippage_trade(H, xa + xb, xh);
    const double dl_a = divergence_loss_trade(A, xa, xa2);
    const double dl_b = divergence_loss_trade(B, xb, xb2);
    const double ls_a = linslip_x_raw(A, xa, xa2);
    const double ls_b = linslip_x_raw(B, xb, xb2);

    const double scale = std::max(1.0, v.dot(H.state_at(xa + xb)));
    const double floor = 1e-13 * scale;
    rep.laws.push_back(make_law("par_divloss", dl_h, dl_a + dl_b, floor, tol));
    rep.laws.push_back(make_law("par_linslip", ls_h, ls_a + ls_b, floor, tol));
    rep.laws.push_back(
        make_law("par_angslip", an_h, angular_slippage_trade(A, xa, xa2), 1e-13, tol));
    rep.laws.push_back(
        make_law("par_angslip_right", an_h, angular_slippage_trade(B, xb, xb2), 1e-13, tol));
    rep.cross = dl_a * ls_b + dl_b * ls_a;
    rep.laws.push_back(make_law("par_load", dl_h * ls_h, dl_a * ls_a + dl_b * ls_b + rep.cross,
                                floor * floor, tol));
    for (double alpha : alphas) {
        const Curve scaled = scale_curve(A, alpha);
        rep.laws.push_back(make_law("scalar_linslip(alpha=" + num(alpha) + ")",
                                    detail::linslip_x_formula(scaled, v, v2), alpha * ls_a,
                                    floor * alpha, tol));
    }
    return rep;
}

}  // namespace ammcalc
