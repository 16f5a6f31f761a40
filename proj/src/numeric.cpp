#include "ammcalc/numeric.hpp"

#include "ammcalc/errors.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace ammcalc {

Interval Interval::intersect(const Interval& other) const {
    return Interval{std::max(lo, other.lo), std::min(hi, other.hi)};
}

std::string Interval::str() const {
    std::ostringstream os;
    os.precision(12);
    os << "(" << lo << ", ";
    if (bounded_above()) {
        os << hi;
    } else {
        os << "inf";
    }
    os << ")";
    return os.str();
}

double toward_lo(const Interval& dom, double x0, double factor) {
    if (!dom.bounded_below()) {
        return x0 - std::abs(x0) * factor - factor;
    }
    return dom.lo + (x0 - dom.lo) / factor;
}

double toward_hi(const Interval& dom, double x0, double factor) {
    if (!dom.bounded_above()) {
        if (x0 > 0.0) {
            return x0 * factor;
        }
        return x0 + factor;
    }
    return dom.hi - (dom.hi - x0) / factor;
}

double default_start(const Interval& dom) {
    if (dom.contains(1.0)) {
        return 1.0;
    }
    if (dom.bounded_above() && dom.bounded_below()) {
        if (dom.lo > 0.0) {
            return std::sqrt(dom.lo * dom.hi);
        }
        return 0.5 * (dom.lo + dom.hi);
    }
    if (dom.bounded_below()) {
        return dom.lo > 0.0 ? 2.0 * dom.lo : dom.lo + 1.0;
    }
    return dom.hi > 0.0 ? 0.5 * dom.hi : dom.hi - 1.0;
}

namespace {

struct WidthTolerance {
    Tolerances tol;
    bool operator()(double a, double b) const {
        const double mid = 0.5 * (std::abs(a) + std::abs(b));
        return std::abs(b - a) <= tol.abs + tol.rel * mid;
    }
};

}  // namespace

double solve_bracketed(const RealFn& f, double lo, double hi, double flo, double fhi,
                       const Tolerances& tol) {
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw RangeError("solve_bracketed: no sign change on bracket");
    }
    if (lo > hi) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    std::uintmax_t max_iter = 400;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, WidthTolerance{tol},
                                                     max_iter);
    // Return whichever end has the smaller residual.
    const double a = r.first;
    const double b = r.second;
    if (a == b) {
        return a;
    }
    const double fa = f(a);
    const double fb = f(b);
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

double solve_monotone(const RealFn& f, const Interval& dom, double x0, const Tolerances& tol,
                      double factor, int max_expansions) {
    const double f0 = f(x0);
    if (f0 == 0.0) {
        return x0;
    }
    if (!std::isfinite(f0)) {
        throw RangeError("solve_monotone: non-finite value at start point");
    }
    const bool neg0 = f0 < 0.0;
    double prev_lo = x0;
    double prev_hi = x0;
    double fprev_lo = f0;
    double fprev_hi = f0;
    bool lo_alive = true;
    bool hi_alive = true;
    double step = factor;
    for (int k = 0; k < max_expansions && (lo_alive || hi_alive); ++k) {
        if (lo_alive) {
            const double x = toward_lo(dom, x0, step);
            if (!dom.contains(x) || x == prev_lo) {
                lo_alive = false;
            } else {
                const double fx = f(x);
                if (!std::isfinite(fx)) {
                    lo_alive = false;
                } else if ((fx < 0.0) != neg0 || fx == 0.0) {
                    return solve_bracketed(f, x, prev_lo, fx, fprev_lo, tol);
                } else {
                    prev_lo = x;
                    fprev_lo = fx;
                }
            }
        }
        if (hi_alive) {
            const double x = toward_hi(dom, x0, step);
            if (!dom.contains(x) || x == prev_hi) {
                hi_alive = false;
            } else {
                const double fx = f(x);
                if (!std::isfinite(fx)) {
                    hi_alive = false;
                } else if ((fx < 0.0) != neg0 || fx == 0.0) {
                    return solve_bracketed(f, prev_hi, x, fprev_hi, fx, tol);
                } else {
                    prev_hi = x;
                    fprev_hi = fx;
                }
            }
        }
        step *= factor;
    }
    throw RangeError("solve_monotone: no sign change found within " + dom.str());
}

double bisect_increasing(const RealFn& f, double lo, double hi, int max_iter) {
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Minimum minimize_unimodal(const RealFn& f, double lo, double hi) {
    std::uintmax_t max_iter = 500;
    const auto r = boost::math::tools::brent_find_minima(f, lo, hi,
                                                         std::numeric_limits<double>::digits / 2,
                                                         max_iter);
    return Minimum{r.first, r.second};
}

double central_difference(const RealFn& f, double x, const Interval& dom) {
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(x), 1e-8);
    while (!(dom.contains(x - h) && dom.contains(x + h))) {
        h *= 0.5;
        if (h < 1e-300) {
            throw DomainError("central_difference: no room inside " + dom.str());
        }
    }
    // Richardson extrapolation over h and h/2 lifts the error to O(h^4).
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) {
        throw ArgumentError("log_grid: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(n);
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

double rel_diff(double a, double b, double floor) {
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / scale;
}

}  // namespace ammcalc
