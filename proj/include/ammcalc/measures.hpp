#pragma once

#include "ammcalc/curve.hpp"
#include "ammcalc/stability.hpp"

namespace ammcalc {

// All losses and slippages are nonnegative magnitudes. The _x variants cover
// trades that deposit X (v2 < v, reserve x grows); _y variants the reverse.
// The _trade suffix takes reserves instead of valuations (v = psi(x)).

/// v x + (1-v) f(x).
double capitalization(const Curve& curve, double x, Valuation v);

/// cap(phi(v), v).
double capitalization_at_stable(const Curve& curve, Valuation v);

/// phi(v) + ((1-v)/v) f(phi(v)), holdings in units of X.
double numeraire_capitalization_x(const Curve& curve, Valuation v);

/// (v/(1-v)) phi(v) + f(phi(v)), holdings in units of Y.
double numeraire_capitalization_y(const Curve& curve, Valuation v);

/// bv2 . Phi(v) - bv2 . Phi(v2).
double divergence_loss(const Curve& curve, Valuation v, Valuation v2);
double divergence_loss_trade(const Curve& curve, double x, double x2);

/// ((1-v2)/(1-v)) (bv . Phi(v2) - bv . Phi(v)); requires v2 <= v.
double linear_slippage_x(const Curve& curve, Valuation v, Valuation v2);
/// (v2/v) (bv . Phi(v2) - bv . Phi(v)); requires v2 >= v.
double linear_slippage_y(const Curve& curve, Valuation v, Valuation v2);
/// Requires x2 >= x.
double linear_slippage_x_trade(const Curve& curve, double x, double x2);
/// Requires x2 <= x.
double linear_slippage_y_trade(const Curve& curve, double x, double x2);

/// arctan((v - v2) / (bv . bv2)). Positive when v > v2; curve-independent.
double angular_slippage(Valuation v, Valuation v2);
/// Change of tangent angle between x and x2 on the curve.
double angular_slippage_trade(const Curve& curve, double x, double x2);

double load_x(const Curve& curve, Valuation v, Valuation v2);
double load_y(const Curve& curve, Valuation v, Valuation v2);
double load_x_trade(const Curve& curve, double x, double x2);
double load_y_trade(const Curve& curve, double x, double x2);

/// x* with f(x*) = x*. Throws DomainError when no fixed point lies in the domain.
double fixed_point(const Curve& curve);

/// v* = psi(x*), where capitalization at stable points peaks.
Valuation max_cap_valuation(const Curve& curve);

/// max(x, f(x)).
double worst_case_divloss(const Curve& curve, double x);

/// A valuation at or near an endpoint of (0,1): exact 0 and 1 are replaced by
/// points 1e-9 inside and flagged.
struct LimitValuation {
    Valuation v;
    bool is_limit;
};
inline constexpr double kLimitOffset = 1e-9;
LimitValuation limit_valuation(double v);

namespace detail {

/// linslip_X formula without the ordering check. The composition law
/// identities are algebraic and hold for either trade direction.
double linslip_x_formula(const Curve& curve, Valuation v, Valuation v2);
double linslip_y_formula(const Curve& curve, Valuation v, Valuation v2);

/// 1 - psi(x) = 1 / (1 - f'(x)), without forming psi.
double complement_at(const Curve& curve, double x);

}  // namespace detail

}  // namespace ammcalc
