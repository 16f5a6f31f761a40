#pragma once

// Test-side oracles: closed forms and definitional evaluations kept apart from
// the library's numerics.

#include "ammcalc/ammcalc.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using ld = long double;

/// Deterministic doubles in [lo, hi).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 12345) : g_(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(g_() >> 11) * 0x1.0p-53);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

private:
    std::mt19937_64 g_;
};

/// phi for c / x^k: (k c (1-v)/v)^(1/(k+1)).
inline ld power_phi(ld c, ld k, ld v) { return std::pow(k * c * (1 - v) / v, 1 / (k + 1)); }

/// 1 / (1 + phi'...) : psi for c / x^k.
inline ld power_psi(ld c, ld k, ld x) {
    const ld r = k * c * std::pow(x, -k - 1);
    return r / (1 + r);
}

/// bv2 . Phi(v) - bv2 . Phi(v2) evaluated directly in long double.
inline ld power_divloss(ld c, ld k, ld v, ld v2) {
    const ld x = power_phi(c, k, v), x2 = power_phi(c, k, v2);
    const ld y = c * std::pow(x, -k), y2 = c * std::pow(x2, -k);
    return v2 * (x - x2) + (1 - v2) * (y - y2);
}

/// ((1-v2)/(1-v)) (bv . Phi(v2) - bv . Phi(v)).
inline ld power_linslip_x(ld c, ld k, ld v, ld v2) {
    const ld x = power_phi(c, k, v), x2 = power_phi(c, k, v2);
    const ld y = c * std::pow(x, -k), y2 = c * std::pow(x2, -k);
    return (1 - v2) / (1 - v) * (v * (x2 - x) + (1 - v) * (y2 - y));
}

/// Constant-product closed form of divloss*(x, x + d).
inline ld cp_divloss_closed(ld x, ld d) { return d * d / (2 * d * x * x + x * x * x + d * d * x + x); }

/// Constant-product closed form of linslip*_X(x, x + d) (magnitude).
inline ld cp_linslip_closed(ld x, ld d) {
    return std::abs(-d * d * (d + x) / (x * x * (d * d + x * x + 2 * d * x + 1)));
}

/// Golden-section minimum of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Five-point central difference.
inline double diff5(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double rel(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

/// Builtin-family curves with default domains.
inline std::vector<ammcalc::Curve> builtin_curves() {
    using namespace ammcalc;
    return {make_constant_product(1.0), make_constant_product(4.0),
            make_constant_power(1.0, 2.0), make_constant_power(3.0, 0.5),
            make_constant_power(0.7, 3.7), scale_curve(make_constant_product(1.0), 2.5),
            scale_curve(make_constant_power(1.0, 2.0), 0.4)};
}

/// A convex, decreasing curve supplied through callables only (no closed forms).
inline ammcalc::Curve custom_curve() {
    // f(x) = 1/x + 1/x^3
    return ammcalc::make_custom(
        "custom", [](double x) { return 1 / x + 1 / (x * x * x); },
        [](double x) { return -1 / (x * x) - 3 / (x * x * x * x); },
        [](double x) { return 2 / (x * x * x) + 12 / (x * x * x * x * x); });
}

}  // namespace oracle
