#include "ammcalc/quadrature.hpp"

#include "ammcalc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace ammcalc {

namespace {

// Kronrod abscissae (x) and weights on [-1, 1]; odd entries are the Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFn& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double a = f(center - dx);
        const double b = f(center + dx);
        f1[j] = a;
        f2[j] = b;
        resk += kWgk[j] * (a + b);
        resabs += kWgk[j] * (std::abs(a) + std::abs(b));
        if (j % 2 == 1) {
            resg += kWg[j / 2] * (a + b);
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double ah = std::abs(half);
    resk *= half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return Segment{lo, hi, resk, err};
}

}  // namespace

QuadratureResult integrate(const RealFn& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opts) {
    if (breakpoints.size() < 2) {
        throw ArgumentError("integrate: need at least two breakpoints");
    }
    std::priority_queue<Segment> heap;
    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (!(hi >= lo)) {
            throw ArgumentError("integrate: breakpoints must be sorted");
        }
        if (hi == lo) {
            continue;
        }
        heap.push(gk15(f, lo, hi));
        out.evaluations += 15;
    }
    auto totals = [&heap]() {
        // Recomputed from scratch to avoid drift from repeated add/subtract.
        auto copy = heap;
        double v = 0.0, e = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair<double, double>{v, e};
    };
    auto [value, error] = totals();
    int splits = 0;
    while (!heap.empty() && error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) &&
           splits < opts.max_subdivisions) {
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            break;  // cannot subdivide further in floating point
        }
        heap.pop();
        const Segment l = gk15(f, worst.lo, mid);
        const Segment r = gk15(f, mid, worst.hi);
        out.evaluations += 30;
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
        if (splits % 64 == 0) {
            std::tie(value, error) = totals();
        }
    }
    std::tie(value, error) = totals();
    out.value = value;
    out.error = error;
    out.intervals = static_cast<int>(heap.size());
    out.converged = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    return out;
}

QuadratureResult integrate(const RealFn& f, double lo, double hi, const QuadratureOptions& opts) {
    const std::array<double, 2> bp{lo, hi};
    return integrate(f, bp, opts);
}

double integrate_checked(const RealFn& f, std::span<const double> breakpoints,
                         const QuadratureOptions& opts) {
    const QuadratureResult r = integrate(f, breakpoints, opts);
    if (!r.converged) {
        std::ostringstream os;
        os.precision(6);
        os << "quadrature did not converge: value " << r.value << ", error estimate " << r.error
           << " after " << r.intervals << " intervals";
        throw QuadratureError(r.value, r.error, os.str());
    }
    return r.value;
}

}  // namespace ammcalc
