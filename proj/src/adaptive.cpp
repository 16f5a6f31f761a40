#include "ammcalc/adaptive.hpp"

#include "ammcalc/errors.hpp"
#include "ammcalc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ammcalc {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void require_on_curve(const Curve& A, State s) {
    const double fy = A.eval(s.x);
    if (std::abs(fy - s.y) > 1e-9 * std::max(1.0, std::abs(s.y))) {
        throw ArgumentError("state (" + num(s.x) + ", " + num(s.y) + ") is not on " + A.label() +
                            " (f(x) = " + num(fy) + ")");
    }
}

}  // namespace

RestrictedCurve pseudo_arbitrage_shift(const Curve& A, State state, Valuation v_new) {
    require_on_curve(A, state);
    const State target = stable_state(A, v_new);
    RestrictedCurve r{A, state.x - target.x, target.y - state.y, A};
    if (r.dx != 0.0 || r.dy != 0.0) {
        r.curve = shift_curve(A, r.dx, r.dy);
    }
    if (!r.curve.domain().contains(state.x)) {
        throw DomainError("pseudo_arbitrage_shift: state leaves the active domain " +
                          r.curve.domain().str());
    }
    return r;
}

// v (x - x') + (1-v)(f(x) - f(x')) = (1-v) D(x, x') for a state on the curve.
double arbitrage_profit(const Curve& A, State state, Valuation v) {
    const double xs = stable_point(A, v);
    const double on_curve = A.eval(state.x);
    const double off = (1.0 - v.value()) * (state.y - on_curve);
    return v.complement() * A.gap(state.x, xs) + off;
}

double distribution_change_objective(const Curve& A, const Curve& A_tilde,
                                     const ValuationDistribution& p,
                                     const ValuationDistribution& p_tilde, State pin) {
    const double fa = A.eval(pin.x);
    const double ga = A_tilde.eval(pin.x);
    if (std::abs(fa - ga) > 1e-9) {
        throw ReplacementRuleError("reserve preservation",
                                   "replacement changes the reserves at x=" + num(pin.x) + ": " +
                                       num(fa) + " vs " + num(ga));
    }
    const double da = A.deriv(pin.x);
    const double dg = A_tilde.deriv(pin.x);
    if (std::abs(da - dg) > 1e-9) {
        throw ReplacementRuleError("rate preservation",
                                   "replacement changes the exchange rate at x=" + num(pin.x) +
                                       ": " + num(-da) + " vs " + num(-dg));
    }
    return expected_capitalization(A, p).value - expected_capitalization(A_tilde, p_tilde).value;
}

double pinned_power_max_k(double a, double y, double slope) {
    if (!(a > 0.0 && y > 0.0 && slope < 0.0)) {
        throw ArgumentError("pinned_power: need a > 0, y > 0 and slope < 0");
    }
    return a * -slope / y;
}

Curve pinned_power(double a, double y, double slope, double k) {
    const double kmax = pinned_power_max_k(a, y, slope);
    if (!(k > 0.0) || k > kmax * (1.0 + 1e-12)) {
        throw ArgumentError("pinned_power: k must lie in (0, " + num(kmax) + "], got " + num(k));
    }
    k = std::min(k, kmax);
    const double s = std::max(0.0, a - k * y / -slope);
    const double c = y * std::pow(a - s, k);
    const Curve base = make_constant_power(c, k);
    return s == 0.0 ? base : shift_curve(base, s, 0.0);
}

Replacement optimize_replacement(const Curve& A, double pin_x, const ValuationDistribution& p,
                                 const ValuationDistribution& p_tilde, int scan_points) {
    const double y = A.eval(pin_x);
    const double m = A.deriv(pin_x);
    const State pin{pin_x, y};
    const double kmax = pinned_power_max_k(pin_x, y, m);
    const double kmin = 1e-3 * kmax;
    const double base = expected_capitalization(A, p).value;
    auto objective = [&](double k) {
        const Curve c = pinned_power(pin_x, y, m, k);
        return base - expected_capitalization(c, p_tilde).value;
    };
    scan_points = std::max(scan_points, 3);
    const auto grid = log_grid(kmin, kmax, static_cast<std::size_t>(scan_points));
    std::size_t best = 0;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = objective(grid[i]);
        if (vals[i] < vals[best]) {
            best = i;
        }
    }
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    Minimum mn{grid[best], vals[best]};
    if (hi > lo) {
        const Minimum r = minimize_unimodal(objective, lo, hi);
        if (r.value < mn.value) {
            mn = r;
        }
    }
    Replacement out{mn.x, 0.0, 0.0, mn.value, pinned_power(pin_x, y, m, mn.x)};
    out.shift = std::max(0.0, pin_x - mn.x * y / -m);
    out.c = y * std::pow(pin_x - out.shift, mn.x);
    // Re-evaluate through the public objective so the pin rules are enforced.
    out.objective = distribution_change_objective(A, out.curve, p, p_tilde, pin);
    out.at_scan_bound = mn.x <= grid.front() * (1.0 + 1e-9) || mn.x >= grid.back() * (1.0 - 1e-9);
    return out;
}

}  // namespace ammcalc
