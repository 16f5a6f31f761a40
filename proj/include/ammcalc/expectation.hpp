#pragma once

#include "ammcalc/curve.hpp"
#include "ammcalc/quadrature.hpp"
#include "ammcalc/stability.hpp"

#include <string>
#include <vector>

namespace ammcalc {

/// v^(a1-1) (1-v)^(a2-1) / B(a1, a2), with B from log-gamma. v is clipped to
/// [1e-12, 1-1e-12]; 0 outside (0,1).
double beta_pdf(double alpha1, double alpha2, double v);

/// Density over (0,1). Normalization is checked by quadrature at construction
/// (within 1e-6); tabulated densities are renormalized first.
class ValuationDistribution {
public:
    enum class Kind { Beta, Uniform, Tabulated };

    static ValuationDistribution beta(double alpha1, double alpha2);
    static ValuationDistribution uniform();
    /// Piecewise-linear density through (points[i], densities[i]), zero
    /// outside [points.front(), points.back()] (a subset of [0,1]).
    static ValuationDistribution tabulated(std::vector<double> points,
                                           std::vector<double> densities);

    double pdf(double v) const;
    Kind kind() const { return kind_; }
    double alpha1() const { return a1_; }
    double alpha2() const { return a2_; }
    std::string label() const;
    /// Points where the density has kinks (tabulated knots); empty otherwise.
    const std::vector<double>& knots() const { return points_; }
    /// |integral of pdf - 1| measured at construction.
    double normalization_error() const { return norm_error_; }

private:
    ValuationDistribution() = default;
    void check_normalization();

    Kind kind_ = Kind::Uniform;
    double a1_ = 1.0;
    double a2_ = 1.0;
    double log_beta_ = 0.0;
    std::vector<double> points_;
    std::vector<double> densities_;
    double norm_error_ = 0.0;
};

enum class MeasureKind { Load, Linslip, Divloss };

/// "load" | "linslip" | "divloss"; throws ArgumentError otherwise.
MeasureKind parse_measure_kind(const std::string& s);
std::string to_string(MeasureKind k);

struct Expectation {
    double value = 0.0;
    double error = 0.0;
};

/// Integral of p(v') M(v0, v') over (0,1), split at v0: the X variant of M
/// below v0 and the Y variant above (divergence loss has no variants).
/// Tolerance: absolute 1e-8 unless overridden. Throws QuadratureError when
/// the tolerance is not reached.
Expectation expected_measure(const Curve& curve, Valuation v0, const ValuationDistribution& p,
                             MeasureKind kind, const QuadratureOptions& opts = {1e-8, 1e-10, 4000});

/// Integral of p(v) bv . Phi(v) over (0,1).
Expectation expected_capitalization(const Curve& curve, const ValuationDistribution& p,
                                    const QuadratureOptions& opts = {1e-10, 1e-10, 4000});

struct SurfaceCell {
    double alpha1;
    double alpha2;
    double expected_load;
    double error;
};

/// Expected load under beta(a1, a2) for every pair from `alphas` (a1 outer,
/// a2 inner). Cells are computed on `jobs` worker threads; the output order is
/// fixed regardless of `jobs`.
std::vector<SurfaceCell> expected_load_surface(const Curve& curve, Valuation v0,
                                               const std::vector<double>& alphas,
                                               unsigned jobs = 1);

}  // namespace ammcalc
