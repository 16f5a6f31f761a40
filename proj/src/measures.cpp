#include "ammcalc/measures.hpp"

#include "ammcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ammcalc {

namespace {

[[noreturn]] void ordering_error(const char* what, double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << a << " and " << b;
    throw ArgumentError(os.str());
}

}  // namespace

namespace detail {

double complement_at(const Curve& curve, double x) { return 1.0 / (1.0 - curve.deriv(x)); }

// bv . Phi(v2) - bv . Phi(v) = (1-v) D(x2, x), so the (1-v)/(1-v) factor cancels.
double linslip_x_formula(const Curve& curve, Valuation v, Valuation v2) {
    const double x = stable_point(curve, v);
    const double x2 = stable_point(curve, v2);
    return v2.complement() * curve.gap(x2, x);
}

double linslip_y_formula(const Curve& curve, Valuation v, Valuation v2) {
    const double x = stable_point(curve, v);
    const double x2 = stable_point(curve, v2);
    return v2.value() / v.value() * v.complement() * curve.gap(x2, x);
}

}  // namespace detail

double capitalization(const Curve& curve, double x, Valuation v) { return v.dot(x, curve.eval(x)); }

double capitalization_at_stable(const Curve& curve, Valuation v) {
    return v.dot(stable_state(curve, v));
}

double numeraire_capitalization_x(const Curve& curve, Valuation v) {
    const State s = stable_state(curve, v);
    return s.x + v.complement() / v.value() * s.y;
}

double numeraire_capitalization_y(const Curve& curve, Valuation v) {
    const State s = stable_state(curve, v);
    return v.value() / v.complement() * s.x + s.y;
}

// v2 (x - x2) + (1-v2)(f(x) - f(x2)) = (1-v2) D(x, x2) since v2 = -(1-v2) f'(x2).
double divergence_loss(const Curve& curve, Valuation v, Valuation v2) {
    const double x = stable_point(curve, v);
    const double x2 = stable_point(curve, v2);
    return v2.complement() * curve.gap(x, x2);
}

double divergence_loss_trade(const Curve& curve, double x, double x2) {
    return detail::complement_at(curve, x2) * curve.gap(x, x2);
}

double linear_slippage_x(const Curve& curve, Valuation v, Valuation v2) {
    if (v2.value() > v.value()) {
        ordering_error("linear_slippage_x requires v2 <= v", v.value(), v2.value());
    }
    return detail::linslip_x_formula(curve, v, v2);
}

double linear_slippage_y(const Curve& curve, Valuation v, Valuation v2) {
    if (v2.value() < v.value()) {
        ordering_error("linear_slippage_y requires v2 >= v", v.value(), v2.value());
    }
    return detail::linslip_y_formula(curve, v, v2);
}

double linear_slippage_x_trade(const Curve& curve, double x, double x2) {
    if (x2 < x) {
        ordering_error("linear_slippage_x_trade requires x2 >= x", x, x2);
    }
    return detail::complement_at(curve, x2) * curve.gap(x2, x);
}

// (v2/v)(1-v) = -f'(x2) / ((1 - f'(x2)) (-f'(x))).
double linear_slippage_y_trade(const Curve& curve, double x, double x2) {
    if (x2 > x) {
        ordering_error("linear_slippage_y_trade requires x2 <= x", x, x2);
    }
    const double d = curve.deriv(x);
    const double d2 = curve.deriv(x2);
    return d2 / (d * (1.0 - d2)) * curve.gap(x2, x);
}

double angular_slippage(Valuation v, Valuation v2) {
    const double a = v.value();
    const double b = v2.value();
    return std::atan((a - b) / (a * b + (1.0 - a) * (1.0 - b)));
}

// With rates r = -f', tan(theta - theta2) = (r - r2) / (1 + r r2).
double angular_slippage_trade(const Curve& curve, double x, double x2) {
    const double r = -curve.deriv(x);
    const double r2 = -curve.deriv(x2);
    return std::atan((r - r2) / (1.0 + r * r2));
}

double load_x(const Curve& curve, Valuation v, Valuation v2) {
    return divergence_loss(curve, v, v2) * linear_slippage_x(curve, v, v2);
}

double load_y(const Curve& curve, Valuation v, Valuation v2) {
    return divergence_loss(curve, v, v2) * linear_slippage_y(curve, v, v2);
}

double load_x_trade(const Curve& curve, double x, double x2) {
    return divergence_loss_trade(curve, x, x2) * linear_slippage_x_trade(curve, x, x2);
}

double load_y_trade(const Curve& curve, double x, double x2) {
    return divergence_loss_trade(curve, x, x2) * linear_slippage_y_trade(curve, x, x2);
}

double fixed_point(const Curve& curve) {
    const RealFn& f = curve.parts().f;
    const RealFn resid = [&f](double x) { return f(x) - x; };
    try {
        return solve_monotone(resid, curve.domain(), default_start(curve.domain()), kTightTol);
    } catch (const RangeError&) {
        throw DomainError(curve.label() + ": no fixed point f(x) = x inside " +
                          curve.domain().str());
    }
}

Valuation max_cap_valuation(const Curve& curve) { return valuation_of(curve, fixed_point(curve)); }

double worst_case_divloss(const Curve& curve, double x) { return std::max(x, curve.eval(x)); }

LimitValuation limit_valuation(double v) {
    if (v <= 0.0) {
        if (v < 0.0) {
            throw ArgumentError("limit_valuation: v must lie in [0,1]");
        }
        return {Valuation(kLimitOffset), true};
    }
    if (v >= 1.0) {
        if (v > 1.0) {
            throw ArgumentError("limit_valuation: v must lie in [0,1]");
        }
        return {Valuation(1.0 - kLimitOffset), true};
    }
    return {Valuation(v), false};
}

}  // namespace ammcalc
