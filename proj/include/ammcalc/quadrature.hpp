#pragma once

#include "ammcalc/numeric.hpp"

#include <span>

namespace ammcalc {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature over [lo, hi]. The
/// interval with the largest error estimate is bisected until the total
/// estimate drops below max(abs_tol, rel_tol |value|). Nodes never touch
/// the endpoints.
QuadratureResult integrate(const RealFn& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

/// Same, with the initial partition given by sorted `breakpoints`
/// (first and last are the integration limits).
QuadratureResult integrate(const RealFn& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opts = {});

/// Value of a converged integration; throws QuadratureError otherwise.
double integrate_checked(const RealFn& f, std::span<const double> breakpoints,
                         const QuadratureOptions& opts = {});

}  // namespace ammcalc
