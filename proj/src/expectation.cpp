#include "ammcalc/expectation.hpp"

#include "ammcalc/errors.hpp"
#include "ammcalc/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace ammcalc {

namespace {

constexpr double kClip = 1e-12;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

void require_alpha(double a, const char* name) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream os;
        os << "beta " << name << " must be positive, got " << a;
        throw ArgumentError(os.str());
    }
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

double beta_pdf(double alpha1, double alpha2, double v) {
    require_alpha(alpha1, "alpha1");
    require_alpha(alpha2, "alpha2");
    if (!(v > 0.0 && v < 1.0)) {
        return 0.0;
    }
    const double c = std::clamp(v, kClip, 1.0 - kClip);
    return std::exp((alpha1 - 1.0) * std::log(c) + (alpha2 - 1.0) * std::log1p(-c) -
                    log_beta(alpha1, alpha2));
}

ValuationDistribution ValuationDistribution::beta(double alpha1, double alpha2) {
    require_alpha(alpha1, "alpha1");
    require_alpha(alpha2, "alpha2");
    ValuationDistribution d;
    d.kind_ = Kind::Beta;
    d.a1_ = alpha1;
    d.a2_ = alpha2;
    d.log_beta_ = log_beta(alpha1, alpha2);
    d.check_normalization();
    return d;
}

ValuationDistribution ValuationDistribution::uniform() {
    ValuationDistribution d;
    d.kind_ = Kind::Uniform;
    return d;
}

ValuationDistribution ValuationDistribution::tabulated(std::vector<double> points,
                                                       std::vector<double> densities) {
    if (points.size() != densities.size() || points.size() < 2) {
        throw ArgumentError("tabulated distribution: need >= 2 points with matching densities");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i] >= 0.0 && points[i] <= 1.0)) {
            throw ArgumentError("tabulated distribution: points must lie in [0,1]");
        }
        if (!(densities[i] >= 0.0) || !std::isfinite(densities[i])) {
            throw ArgumentError("tabulated distribution: densities must be nonnegative");
        }
        if (i > 0) {
            if (!(points[i] > points[i - 1])) {
                throw ArgumentError("tabulated distribution: points must be strictly increasing");
            }
            mass += 0.5 * (densities[i] + densities[i - 1]) * (points[i] - points[i - 1]);
        }
    }
    if (!(mass > 0.0)) {
        throw ArgumentError("tabulated distribution: zero total mass");
    }
    for (double& d : densities) {
        d /= mass;
    }
    ValuationDistribution d;
    d.kind_ = Kind::Tabulated;
    d.points_ = std::move(points);
    d.densities_ = std::move(densities);
    d.check_normalization();
    return d;
}

double ValuationDistribution::pdf(double v) const {
    if (!(v > 0.0 && v < 1.0)) {
        return 0.0;
    }
    switch (kind_) {
        case Kind::Uniform:
            return 1.0;
        case Kind::Beta: {
            const double c = std::clamp(v, kClip, 1.0 - kClip);
            return std::exp((a1_ - 1.0) * std::log(c) + (a2_ - 1.0) * std::log1p(-c) - log_beta_);
        }
        case Kind::Tabulated: {
            if (v < points_.front() || v > points_.back()) {
                return 0.0;
            }
            auto it = std::upper_bound(points_.begin(), points_.end(), v);
            if (it == points_.end()) {
                return densities_.back();
            }
            const std::size_t i = static_cast<std::size_t>(it - points_.begin());
            const double w = (v - points_[i - 1]) / (points_[i] - points_[i - 1]);
            return (1.0 - w) * densities_[i - 1] + w * densities_[i];
        }
    }
    return 0.0;
}

std::string ValuationDistribution::label() const {
    switch (kind_) {
        case Kind::Uniform:
            return "uniform";
        case Kind::Beta:
            return "beta(" + num(a1_) + "," + num(a2_) + ")";
        case Kind::Tabulated:
            return "tabulated(" + std::to_string(points_.size()) + " points)";
    }
    return "?";
}

void ValuationDistribution::check_normalization() {
    const RealFn f = [this](double v) { return pdf(v); };
    double total = 0.0;
    if (kind_ == Kind::Beta) {
        // Quadrature over [h, 1-h] plus the analytic mass of each clipped end,
        // h^a / (a B), so strongly singular ends are not miscounted.
        const double h = kClip;
        const std::vector<double> bp{h, 1e-9, 1e-6, 1e-3, 0.5, 1 - 1e-3, 1 - 1e-6, 1 - 1e-9, 1 - h};
        const auto r = integrate(f, bp, {1e-10, 1e-10, 8000});
        total = r.value + std::exp(a1_ * std::log(h) - std::log(a1_) - log_beta_) +
                std::exp(a2_ * std::log(h) - std::log(a2_) - log_beta_);
    } else {
        total = integrate(f, points_, {1e-12, 1e-12, 2000}).value;
    }
    norm_error_ = std::abs(total - 1.0);
    if (norm_error_ > 1e-6) {
        throw ArgumentError(label() + ": density integrates to " + num(total) + ", not 1");
    }
}

MeasureKind parse_measure_kind(const std::string& s) {
    if (s == "load") {
        return MeasureKind::Load;
    }
    if (s == "linslip") {
        return MeasureKind::Linslip;
    }
    if (s == "divloss") {
        return MeasureKind::Divloss;
    }
    throw ArgumentError("unknown measure kind '" + s + "' (expected load, linslip or divloss)");
}

std::string to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::Load:
            return "load";
        case MeasureKind::Linslip:
            return "linslip";
        case MeasureKind::Divloss:
            return "divloss";
    }
    return "?";
}

namespace {

std::vector<double> breakpoints(const ValuationDistribution& p, std::vector<double> extra) {
    std::vector<double> bp{0.0, 1.0};
    bp.insert(bp.end(), extra.begin(), extra.end());
    bp.insert(bp.end(), p.knots().begin(), p.knots().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

Expectation checked(const RealFn& f, const std::vector<double>& bp, const QuadratureOptions& opts) {
    const QuadratureResult r = integrate(f, bp, opts);
    if (!r.converged) {
        std::ostringstream os;
        os.precision(6);
        os << "expectation quadrature did not converge: value " << r.value << ", error estimate "
           << r.error;
        throw QuadratureError(r.value, r.error, os.str());
    }
    return {r.value, r.error};
}

Valuation clipped(double v) { return Valuation(std::clamp(v, kClip, 1.0 - kClip)); }

}  // namespace

Expectation expected_measure(const Curve& curve, Valuation v0, const ValuationDistribution& p,
                             MeasureKind kind, const QuadratureOptions& opts) {
    const double c = v0.value();
    const RealFn f = [&](double v) {
        const double w = p.pdf(v);
        if (w == 0.0 || v == c) {
            return 0.0;
        }
        const Valuation v2 = clipped(v);
        switch (kind) {
            case MeasureKind::Divloss:
                return w * divergence_loss(curve, v0, v2);
            case MeasureKind::Linslip:
                return w * (v < c ? linear_slippage_x(curve, v0, v2)
                                  : linear_slippage_y(curve, v0, v2));
            case MeasureKind::Load:
                return w * (v < c ? load_x(curve, v0, v2) : load_y(curve, v0, v2));
        }
        return 0.0;
    };
    return checked(f, breakpoints(p, {c}), opts);
}

Expectation expected_capitalization(const Curve& curve, const ValuationDistribution& p,
                                    const QuadratureOptions& opts) {
    const RealFn f = [&](double v) {
        const double w = p.pdf(v);
        return w == 0.0 ? 0.0 : w * capitalization_at_stable(curve, clipped(v));
    };
    return checked(f, breakpoints(p, {}), opts);
}

std::vector<SurfaceCell> expected_load_surface(const Curve& curve, Valuation v0,
                                               const std::vector<double>& alphas, unsigned jobs) {
    const std::size_t n = alphas.size();
    std::vector<SurfaceCell> cells(n * n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                const double a1 = alphas[k / n];
                const double a2 = alphas[k % n];
                const auto p = ValuationDistribution::beta(a1, a2);
                const Expectation e = expected_measure(curve, v0, p, MeasureKind::Load);
                cells[k] = SurfaceCell{a1, a2, e.value, e.error};
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, cells.size()))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return cells;
}

}  // namespace ammcalc
