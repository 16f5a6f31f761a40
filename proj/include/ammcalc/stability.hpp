#pragma once

#include "ammcalc/curve.hpp"

namespace ammcalc {

/// Relative price v in (0,1): v units of X are worth 1-v units of Y.
class Valuation {
public:
    /// Throws ArgumentError unless 0 < v < 1.
    explicit Valuation(double v);

    double value() const { return v_; }
    double complement() const { return 1.0 - v_; }
    /// Value clamped to [1e-12, 1-1e-12] for use in quotients.
    double clamped() const;
    /// The exchange rate -f' at which this valuation is stable: v / (1-v).
    double rate() const;

    /// bv . (x, y)
    double dot(double x, double y) const { return v_ * x + (1.0 - v_) * y; }
    double dot(const State& s) const { return dot(s.x, s.y); }

private:
    double v_;
};

inline constexpr double kValuationClamp = 1e-12;

/// phi(v): the x with f'(x) = -v/(1-v). Closed form when the family has one,
/// otherwise a bracketed root of f' + v/(1-v). Throws ExpressivityError when
/// the slope is not attained inside the domain.
double stable_point(const Curve& curve, Valuation v, const Tolerances& tol = kTightTol);

/// psi(x) = -f'(x) / (1 - f'(x)).
Valuation valuation_of(const Curve& curve, double x);

/// Phi(v) = (phi(v), f(phi(v))).
State stable_state(const Curve& curve, Valuation v, const Tolerances& tol = kTightTol);

}  // namespace ammcalc
