#pragma once

#include "ammcalc/curve.hpp"
#include "ammcalc/expectation.hpp"
#include "ammcalc/stability.hpp"

namespace ammcalc {

/// f~(x) = f(x - dx) - dy on the interval where both shifted reserves stay
/// positive. Evaluation outside that interval raises DomainError.
struct RestrictedCurve {
    Curve base;
    double dx = 0.0;
    double dy = 0.0;
    Curve curve;

    const Interval& active_domain() const { return curve.domain(); }
    /// Units of X held but not tradable (dx when dx > 0).
    double inaccessible_x() const { return dx > 0.0 ? dx : 0.0; }
    /// Units of Y held but not tradable (-dy when dy < 0).
    double inaccessible_y() const { return dy < 0.0 ? -dy : 0.0; }
};

/// Shifts A by the would-be arbitrage trade so that `state` becomes the
/// stable point for v_new: dx = a1 - a2, dy = b2 - b1 with (a2, b2) = Phi(v_new).
/// Throws ArgumentError when the state is off the curve and ExpressivityError
/// when v_new cannot be expressed.
RestrictedCurve pseudo_arbitrage_shift(const Curve& A, State state, Valuation v_new);

/// bv . state - bv . Phi(v) >= 0: profit available to an arbitrageur moving
/// the pool from `state` to its stable point for v.
double arbitrage_profit(const Curve& A, State state, Valuation v);

/// Expected stable capitalization of A under p minus that of A~ under p~.
/// Both curves must agree in value and slope at pin.x (within 1e-9); a
/// violation raises ReplacementRuleError naming "reserve preservation" or
/// "rate preservation".
double distribution_change_objective(const Curve& A, const Curve& A_tilde,
                                     const ValuationDistribution& p,
                                     const ValuationDistribution& p_tilde, State pin);

/// Member of the shifted power family c (x - s)^-k through (a, y) with slope
/// m < 0 at a: s = a - k y / |m|, c = y (a - s)^k. Requires 0 < k <= a |m| / y
/// so that s >= 0.
Curve pinned_power(double a, double y, double slope, double k);

/// Largest admissible k for pinned_power at the given pin.
double pinned_power_max_k(double a, double y, double slope);

struct Replacement {
    double k = 0.0;
    double shift = 0.0;
    double c = 0.0;
    double objective = 0.0;
    Curve curve;
    /// The minimum sits on an end of the scanned k range [1e-3 kmax, kmax].
    bool at_scan_bound = false;
};

/// Minimizes distribution_change_objective over pinned_power at A's state
/// (pin_x, f(pin_x)): a log-spaced scan over k followed by a bounded
/// Brent refinement around the best scan point.
Replacement optimize_replacement(const Curve& A, double pin_x, const ValuationDistribution& p,
                                 const ValuationDistribution& p_tilde, int scan_points = 25);

}  // namespace ammcalc
