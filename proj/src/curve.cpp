#include "ammcalc/curve.hpp"

#include "ammcalc/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ammcalc {

using nlohmann::json;

namespace {

json domain_json(const Interval& dom) {
    json hi = dom.bounded_above() ? json(dom.hi) : json(nullptr);
    return json::array({dom.lo, hi});
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ArgumentError(std::string(name) + " must be a positive finite number, got " +
                            fmt_num(v));
    }
}

}  // namespace

// ------------------------------------------------------------------ Curve

Curve::Curve(Parts parts) : parts_(std::make_shared<const Parts>(std::move(parts))) {
    if (!parts_->f || !parts_->df || !parts_->d2f) {
        throw ArgumentError("Curve: f, f' and f'' callables are required");
    }
    if (parts_->domain.empty()) {
        throw DomainError("Curve '" + parts_->label + "': empty domain " + parts_->domain.str());
    }
}

void Curve::check_domain(double x, const char* what) const {
    if (!parts_->domain.contains(x)) {
        std::ostringstream os;
        os.precision(17);
        os << label() << ": " << what << " at x=" << x << " outside domain "
           << parts_->domain.str();
        throw DomainError(os.str());
    }
}

double Curve::eval(double x) const {
    check_domain(x, "eval");
    return parts_->f(x);
}

double Curve::deriv(double x) const {
    check_domain(x, "deriv");
    return parts_->df(x);
}

double Curve::deriv2(double x) const {
    check_domain(x, "deriv2");
    return parts_->d2f(x);
}

double Curve::inverse(double y, const Tolerances& tol) const {
    if (parts_->inverse) {
        const double x = (*parts_->inverse)(y);
        if (!domain().contains(x) || !std::isfinite(x)) {
            throw RangeError(label() + ": inverse(" + fmt_num(y) + ") outside domain " +
                             domain().str());
        }
        return x;
    }
    return numeric_inverse(*this, y, tol);
}

std::optional<double> Curve::closed_slope_inverse(double slope) const {
    if (!parts_->slope_inverse) {
        return std::nullopt;
    }
    const double x = (*parts_->slope_inverse)(slope);
    if (!domain().contains(x) || !std::isfinite(x)) {
        throw ExpressivityError(label() + ": slope " + fmt_num(slope) +
                                " not attained inside domain " + domain().str());
    }
    return x;
}

double Curve::gap(double x, double ref) const {
    check_domain(x, "gap");
    check_domain(ref, "gap");
    if (parts_->gap) {
        return (*parts_->gap)(x, ref);
    }
    return parts_->f(x) - parts_->f(ref) - parts_->df(ref) * (x - ref);
}

// ---------------------------------------------------------------- families

Curve make_constant_product(double c) {
    require_positive(c, "constant_product: c");
    Curve::Parts p;
    p.f = [c](double x) { return c / x; };
    p.df = [c](double x) { return -c / (x * x); };
    p.d2f = [c](double x) { return 2.0 * c / (x * x * x); };
    p.inverse = [c](double y) { return c / y; };
    p.slope_inverse = [c](double s) { return std::sqrt(c / -s); };
    // c/x - c/r + c (x - r)/r^2 = c (x - r)^2 / (x r^2)
    p.gap = [c](double x, double r) {
        const double d = x - r;
        return c * d * d / (x * r * r);
    };
    p.domain = Interval{};
    p.label = "constant_product(c=" + fmt_num(c) + ")";
    p.spec_json = json{{"family", "constant_product"},
                       {"params", {{"c", c}}},
                       {"domain", domain_json(p.domain)}}
                      .dump();
    return Curve(std::move(p));
}

Curve make_constant_power(double c, double k) {
    require_positive(c, "constant_power: c");
    require_positive(k, "constant_power: k");
    Curve::Parts p;
    p.f = [c, k](double x) { return c * std::pow(x, -k); };
    p.df = [c, k](double x) { return -k * c * std::pow(x, -k - 1.0); };
    p.d2f = [c, k](double x) { return k * (k + 1.0) * c * std::pow(x, -k - 2.0); };
    p.inverse = [c, k](double y) { return std::pow(c / y, 1.0 / k); };
    p.slope_inverse = [c, k](double s) { return std::pow(k * c / -s, 1.0 / (k + 1.0)); };
    // (c / r^k) [ (x/r)^-k - 1 + k (x/r - 1) ]
    p.gap = [c, k](double x, double r) {
        const double u = (x - r) / r;
        return c * std::pow(r, -k) * (std::expm1(-k * std::log1p(u)) + k * u);
    };
    p.domain = Interval{};
    p.label = "constant_power(c=" + fmt_num(c) + ",k=" + fmt_num(k) + ")";
    p.spec_json = json{{"family", "constant_power"},
                       {"params", {{"c", c}, {"k", k}}},
                       {"domain", domain_json(p.domain)}}
                      .dump();
    return Curve(std::move(p));
}

Curve scale_curve(const Curve& base, double alpha) {
    require_positive(alpha, "scale_curve: alpha");
    const Curve::Parts& b = base.parts();
    Curve::Parts p;
    p.f = [f = b.f, alpha](double x) { return alpha * f(x / alpha); };
    p.df = [df = b.df, alpha](double x) { return df(x / alpha); };
    p.d2f = [d2f = b.d2f, alpha](double x) { return d2f(x / alpha) / alpha; };
    if (b.inverse) {
        p.inverse = [inv = *b.inverse, alpha](double y) { return alpha * inv(y / alpha); };
    } else {
        p.inverse = [base, alpha](double y) { return alpha * base.inverse(y / alpha); };
    }
    if (b.slope_inverse) {
        p.slope_inverse = [si = *b.slope_inverse, alpha](double s) { return alpha * si(s); };
    }
    if (b.gap) {
        p.gap = [g = *b.gap, alpha](double x, double r) { return alpha * g(x / alpha, r / alpha); };
    }
    p.domain = Interval{alpha * b.domain.lo, alpha * b.domain.hi};
    p.label = "scaled(" + fmt_num(alpha) + "," + b.label + ")";
    if (!b.spec_json.empty()) {
        p.spec_json = json{{"family", "scaled"},
                           {"params", {{"alpha", alpha}}},
                           {"base", json::parse(b.spec_json)},
                           {"domain", domain_json(p.domain)}}
                          .dump();
    }
    return Curve(std::move(p));
}

Curve shift_curve(const Curve& base, double dx, double dy) {
    if (!std::isfinite(dx) || !std::isfinite(dy)) {
        throw ArgumentError("shift_curve: non-finite shift");
    }
    const Curve::Parts& b = base.parts();
    Interval dom{std::max(0.0, dx + b.domain.lo), dx + b.domain.hi};
    if (dy > 0.0) {
        // f(x - dx) > dy  <=>  x < dx + f^-1(dy) since f is decreasing.
        try {
            const double cut = dx + base.inverse(dy);
            dom.hi = std::min(dom.hi, cut);
        } catch (const RangeError&) {
            // dy outside the range of f: either f > dy everywhere (no cut) or nowhere.
            const double probe = default_start(b.domain);
            if (!(b.f(probe) > dy)) {
                throw DomainError("shift_curve: shifted reserves are never positive");
            }
        }
    }
    if (dom.empty()) {
        throw DomainError("shift_curve: empty active domain " + dom.str());
    }
    Curve::Parts p;
    p.f = [f = b.f, dx, dy](double x) { return f(x - dx) - dy; };
    p.df = [df = b.df, dx](double x) { return df(x - dx); };
    p.d2f = [d2f = b.d2f, dx](double x) { return d2f(x - dx); };
    p.inverse = [base, dx, dy](double y) { return dx + base.inverse(y + dy); };
    if (b.slope_inverse) {
        p.slope_inverse = [si = *b.slope_inverse, dx](double s) { return dx + si(s); };
    }
    if (b.gap) {
        p.gap = [g = *b.gap, dx](double x, double r) { return g(x - dx, r - dx); };
    }
    p.domain = dom;
    p.label = "shifted(" + fmt_num(dx) + "," + fmt_num(dy) + "," + b.label + ")";
    if (!b.spec_json.empty()) {
        p.spec_json = json{{"family", "shifted"},
                           {"base", json::parse(b.spec_json)},
                           {"dx", dx},
                           {"dy", dy},
                           {"domain", domain_json(dom)}}
                          .dump();
    }
    return Curve(std::move(p));
}

Curve restrict_domain(const Curve& base, const Interval& dom) {
    Curve::Parts p = base.parts();
    p.domain = base.domain().intersect(dom);
    if (p.domain.empty()) {
        throw DomainError("restrict_domain: empty intersection " + p.domain.str());
    }
    if (!p.spec_json.empty()) {
        json j = json::parse(p.spec_json);
        j["domain"] = domain_json(p.domain);
        p.spec_json = j.dump();
    }
    return Curve(std::move(p));
}

// ---------------------------------------------------------------- tabulated

namespace {

/// Natural cubic spline in (u, w) = (ln x, ln y).
struct LogLogSpline {
    std::vector<double> u, w, m;  // m: second derivatives at knots

    LogLogSpline(std::span<const double> xs, std::span<const double> ys) {
        const std::size_t n = xs.size();
        u.resize(n);
        w.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = std::log(xs[i]);
            w[i] = std::log(ys[i]);
        }
        m.assign(n, 0.0);
        if (n < 3) {
            return;
        }
        // Thomas algorithm on the interior equations.
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = u[i] - u[i - 1];
            const double h1 = u[i + 1] - u[i];
            const double diag = 2.0 * (h0 + h1);
            const double rhs = 6.0 * ((w[i + 1] - w[i]) / h1 - (w[i] - w[i - 1]) / h0);
            const double denom = diag - h0 * c[i - 1];
            c[i] = h1 / denom;
            d[i] = (rhs - h0 * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m[i] = d[i] - c[i] * m[i + 1];
        }
    }

    struct Eval {
        double s, ds, d2s;
    };

    Eval at(double uu) const {
        auto it = std::upper_bound(u.begin(), u.end(), uu);
        std::size_t i = static_cast<std::size_t>(std::distance(u.begin(), it));
        i = std::clamp<std::size_t>(i, 1, u.size() - 1);
        const double h = u[i] - u[i - 1];
        const double a = (u[i] - uu) / h;
        const double b = (uu - u[i - 1]) / h;
        const double s = a * w[i - 1] + b * w[i] +
                         ((a * a * a - a) * m[i - 1] + (b * b * b - b) * m[i]) * h * h / 6.0;
        const double ds = (w[i] - w[i - 1]) / h -
                          (3.0 * a * a - 1.0) / 6.0 * h * m[i - 1] +
                          (3.0 * b * b - 1.0) / 6.0 * h * m[i];
        const double d2s = a * m[i - 1] + b * m[i];
        return {s, ds, d2s};
    }
};

}  // namespace

Curve make_tabulated(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 3) {
        throw ArgumentError("make_tabulated: need >= 3 knots with matching x and y");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw ArgumentError("make_tabulated: knots must be positive");
        }
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw ArgumentError("make_tabulated: x knots must be strictly increasing");
        }
    }
    auto spline = std::make_shared<const LogLogSpline>(xs, ys);
    Curve::Parts p;
    p.f = [spline](double x) { return std::exp(spline->at(std::log(x)).s); };
    p.df = [spline](double x) {
        const auto e = spline->at(std::log(x));
        return std::exp(e.s) * e.ds / x;
    };
    p.d2f = [spline](double x) {
        const auto e = spline->at(std::log(x));
        return std::exp(e.s) / (x * x) * (e.d2s + e.ds * e.ds - e.ds);
    };
    p.domain = Interval{xs.front(), xs.back()};
    p.label = "tabulated(" + std::to_string(xs.size()) + " knots)";
    p.spec_json = json{{"family", "tabulated"},
                       {"params",
                        {{"x", std::vector<double>(xs.begin(), xs.end())},
                         {"y", std::vector<double>(ys.begin(), ys.end())}}},
                       {"domain", domain_json(p.domain)}}
                      .dump();
    return Curve(std::move(p));
}

Curve make_custom(std::string label, RealFn f, RealFn df, RealFn d2f, Interval domain) {
    Curve::Parts p;
    p.f = std::move(f);
    p.df = std::move(df);
    p.d2f = std::move(d2f);
    p.domain = domain;
    p.label = std::move(label);
    return Curve(std::move(p));
}

double numeric_inverse(const Curve& curve, double y, const Tolerances& tol) {
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw RangeError(curve.label() + ": inverse requires y > 0, got " + fmt_num(y));
    }
    const auto& f = curve.parts().f;
    const RealFn resid = [&](double x) { return f(x) - y; };
    double x;
    try {
        x = solve_monotone(resid, curve.domain(), default_start(curve.domain()), kTightTol);
    } catch (const RangeError&) {
        throw RangeError(curve.label() + ": y=" + fmt_num(y) + " outside sampled range of f");
    }
    const double r = std::abs(f(x) - y);
    // Residual in y is limited by |f'| * ulp(x); allow for that on steep curves.
    const double slack = std::abs(curve.parts().df(x)) * std::abs(x) * 4e-16;
    if (r > tol.abs + tol.rel * y + slack) {
        throw RangeError(curve.label() + ": inverse residual " + fmt_num(r) + " at y=" +
                         fmt_num(y));
    }
    return x;
}

// ---------------------------------------------------------------- axioms

std::vector<double> default_grid(const Curve& curve, std::size_t n) {
    const Interval& dom = curve.domain();
    if (curve.has_default_domain()) {
        return log_grid(1e-3, 1e3, n);
    }
    std::vector<double> out;
    out.reserve(n);
    if (dom.bounded_above()) {
        const double lo = dom.lo;
        const double hi = dom.hi;
        if (lo > 0.0 && hi / lo > 100.0) {
            // Wide positive interval: log spacing, pulled slightly inside.
            auto g = log_grid(lo * 1.001, hi * 0.999, n);
            return g;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n + 1));
        }
        return out;
    }
    // (lo, inf): offsets from lo on a log scale.
    const double base = std::max(std::abs(dom.lo), 1.0);
    for (double off : log_grid(1e-3 * base, 1e3 * base, n)) {
        out.push_back(dom.lo + off);
    }
    return out;
}

namespace {

std::string num(double v) { return fmt_num(v); }

}  // namespace

namespace {

/// Analytic derivative d against its finite difference fd of a function with
/// value `fval` at x; the central difference carries a rounding error of
/// roughly eps^(2/3) |fval| / |x|.
bool fd_agrees(double d, double fd, double fval, double x, double rel_tol) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double rounding = 100.0 * std::cbrt(eps * eps) * std::abs(fval) / std::max(std::abs(x), 1e-8);
    return std::abs(d - fd) <= rel_tol * std::max(std::abs(d), std::abs(fd)) + rounding;
}

}  // namespace

AxiomReport validate_axioms(const Curve& curve, std::span<const double> grid,
                            const AxiomOptions& opts) {
    AxiomReport rep;
    const Interval& dom = curve.domain();
    std::size_t inside = 0;
    for (double x : grid) {
        inside += dom.contains(x) ? 1 : 0;
    }
    if (inside < 3) {
        throw ArgumentError("validate_axioms: grid needs at least 3 points inside " + dom.str());
    }

    auto add = [&rep](double x, const std::string& check, const std::string& detail) {
        rep.violations.push_back({x, check, detail});
        if (check == "continuity") {
            rep.continuity_ok = false;
        } else if (check == "expressivity") {
            rep.expressivity_ok = false;
        } else {
            rep.convexity_ok = false;
        }
    };

    const RealFn f = curve.parts().f;
    const RealFn df = curve.parts().df;
    for (double x : grid) {
        if (!dom.contains(x)) {
            continue;
        }
        const double fx = f(x);
        const double d1 = df(x);
        const double d2 = curve.parts().d2f(x);
        if (!(fx > 0.0) || !std::isfinite(fx)) {
            add(x, "continuity", "f(x)=" + num(fx) + " is not a positive reserve");
        }
        if (!(d1 < 0.0) || !std::isfinite(d1)) {
            add(x, "continuity", "f'(x)=" + num(d1) + " is not negative (not strictly decreasing)");
        }
        if (!(d2 > 0.0) || !std::isfinite(d2)) {
            add(x, "convexity", "f''(x)=" + num(d2) + " is not positive (not strictly convex)");
        }
        try {
            const double fd1 = central_difference(f, x, dom);
            if (!fd_agrees(d1, fd1, fx, x, opts.deriv_rel_tol)) {
                add(x, "continuity",
                    "f'(x)=" + num(d1) + " disagrees with finite difference " + num(fd1));
            }
            const double fd2 = central_difference(df, x, dom);
            if (!fd_agrees(d2, fd2, d1, x, opts.deriv2_rel_tol)) {
                add(x, "convexity",
                    "f''(x)=" + num(d2) + " disagrees with finite difference " + num(fd2));
            }
        } catch (const DomainError&) {
            rep.notes.push_back("finite-difference check skipped at x=" + num(x));
        }
    }

    // Expressivity: -f' must exceed max_rate toward the lower end of the
    // domain and drop below min_rate toward the upper end.
    const double x0 = default_start(dom);
    double max_seen = -df(x0);
    double min_seen = -df(x0);
    double f_max = f(x0);
    double f_min = f(x0);
    double step = 10.0;
    bool side_alive[2] = {true, true};
    for (int k = 0; k < 40; ++k, step *= 10.0) {
        const double probes[2] = {toward_lo(dom, x0, step), toward_hi(dom, x0, step)};
        for (int side = 0; side < 2; ++side) {
            const double x = probes[side];
            if (!side_alive[side] || !dom.contains(x)) {
                continue;
            }
            double r, fx;
            try {
                r = -df(x);
                fx = f(x);
            } catch (const AmmError& e) {
                side_alive[side] = false;
                rep.notes.push_back("expressivity probe stopped at x=" + num(x) + ": " + e.what());
                continue;
            }
            if (std::isfinite(r)) {
                max_seen = std::max(max_seen, r);
                min_seen = std::min(min_seen, r);
            }
            if (std::isfinite(fx)) {
                f_max = std::max(f_max, fx);
                f_min = std::min(f_min, fx);
            }
        }
    }
    if (!(max_seen > opts.max_rate)) {
        add(dom.lo, "expressivity",
            "exchange rate -f' only reaches " + num(max_seen) + " toward the lower domain end");
    }
    if (!(min_seen < opts.min_rate)) {
        add(dom.hi, "expressivity",
            "exchange rate -f' only falls to " + num(min_seen) + " toward the upper domain end");
    }

    if (curve.has_default_domain()) {
        rep.boundary_ok = f_max > 1.0 / opts.min_rate && f_min < opts.min_rate;
        if (!rep.boundary_ok) {
            rep.notes.push_back("boundary: sampled f range [" + num(f_min) + ", " + num(f_max) +
                                "] does not approach (0, inf)");
        }
    }
    return rep;
}

AxiomReport validate_axioms(const Curve& curve, const AxiomOptions& opts) {
    const auto grid = default_grid(curve);
    return validate_axioms(curve, grid, opts);
}

}  // namespace ammcalc
