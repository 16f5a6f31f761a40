#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ammcalc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); hi may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = kInf;

    bool contains(double x) const { return x > lo && x < hi; }
    bool bounded_above() const { return std::isfinite(hi); }
    bool bounded_below() const { return std::isfinite(lo); }
    bool empty() const { return !(hi > lo); }
    Interval intersect(const Interval& other) const;
    std::string str() const;
};

/// Root-finding termination: bracket width <= abs + rel * |x|.
struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-12;
};

/// Tolerances used internally when a result feeds a residual check.
inline constexpr Tolerances kTightTol{1e-15, 1e-300};

using RealFn = std::function<double(double)>;

/// Point obtained by moving from x0 toward the lower end of `dom` by `factor`:
/// geometric division when lo == 0, otherwise the gap to lo shrinks by `factor`.
double toward_lo(const Interval& dom, double x0, double factor);
double toward_hi(const Interval& dom, double x0, double factor);

/// A reasonable interior starting point (1 when admissible).
double default_start(const Interval& dom);

/// Root of f in [lo, hi] given a sign change; TOMS 748 under the hood.
double solve_bracketed(const RealFn& f, double lo, double hi, double flo, double fhi,
                       const Tolerances& tol = {});

/// Root of a monotone f inside `dom`. The bracket is grown from x0 by
/// repeated `factor` steps in both directions (at most `max_expansions`).
/// Throws RangeError when no sign change is found.
double solve_monotone(const RealFn& f, const Interval& dom, double x0, const Tolerances& tol = {},
                      double factor = 10.0, int max_expansions = 40);

/// Plain bisection for a function that is increasing on [lo, hi].
double bisect_increasing(const RealFn& f, double lo, double hi, int max_iter = 200);

/// Minimum of a unimodal function on [lo, hi].
struct Minimum {
    double x;
    double value;
};
Minimum minimize_unimodal(const RealFn& f, double lo, double hi);

/// Central finite difference, stepping inside `dom`.
double central_difference(const RealFn& f, double x, const Interval& dom);

/// n points log-spaced on [lo, hi] (both > 0), endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// |a - b| / max(|a|, |b|, floor).
double rel_diff(double a, double b, double floor = 1e-300);

}  // namespace ammcalc
