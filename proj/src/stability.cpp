#include "ammcalc/stability.hpp"

#include "ammcalc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ammcalc {

Valuation::Valuation(double v) : v_(v) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "valuation must lie in (0,1), got " << v;
        throw ArgumentError(os.str());
    }
}

double Valuation::clamped() const { return std::clamp(v_, kValuationClamp, 1.0 - kValuationClamp); }

double Valuation::rate() const {
    const double c = clamped();
    return c / (1.0 - c);
}

double stable_point(const Curve& curve, Valuation v, const Tolerances& tol) {
    const double target = -v.rate();
    if (auto x = curve.closed_slope_inverse(target)) {
        return *x;
    }
    const RealFn& df = curve.parts().df;
    const RealFn resid = [&df, target](double x) { return df(x) - target; };
    try {
        return solve_monotone(resid, curve.domain(), default_start(curve.domain()), tol);
    } catch (const RangeError&) {
        std::ostringstream os;
        os.precision(12);
        os << curve.label() << ": exchange rate " << -target << " (v=" << v.value()
           << ") not attained inside domain " << curve.domain().str();
        throw ExpressivityError(os.str());
    }
}

Valuation valuation_of(const Curve& curve, double x) {
    const double d = curve.deriv(x);
    const double v = -d / (1.0 - d);
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os.precision(12);
        os << curve.label() << ": slope " << d << " at x=" << x
           << " does not map to a valuation in (0,1)";
        throw ExpressivityError(os.str());
    }
    return Valuation(v);
}

State stable_state(const Curve& curve, Valuation v, const Tolerances& tol) {
    const double x = stable_point(curve, v, tol);
    return curve.state_at(x);
}

}  // namespace ammcalc
