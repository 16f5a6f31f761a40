#pragma once

#include "ammcalc/numeric.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ammcalc {

/// Two-argument map (x, x_ref) -> value; used for the tangent gap.
using GapFn = std::function<double(double, double)>;

/// A reserve point (x, y) on the curve of a two-asset AMM.
struct State {
    double x = 0.0;
    double y = 0.0;
};

/// The AMM curve x -> f(x): strictly decreasing, strictly convex, twice
/// differentiable on an open domain. Curves are immutable values; copies
/// share the same callables.
class Curve {
public:
    struct Parts {
        RealFn f;
        RealFn df;
        RealFn d2f;
        /// Closed-form f^-1, when the family has one.
        std::optional<RealFn> inverse;
        /// Closed-form (f')^-1 on negative slopes, when the family has one.
        std::optional<RealFn> slope_inverse;
        /// Closed-form tangent gap f(x) - f(r) - f'(r)(x - r), when available.
        std::optional<GapFn> gap;
        Interval domain;
        std::string label;
        /// Serialized JSON spec; empty for curves built from arbitrary callables.
        std::string spec_json;
    };

    explicit Curve(Parts parts);

    double eval(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    /// f^-1(y). Closed form when available, else bracketed root-finding.
    double inverse(double y, const Tolerances& tol = {}) const;

    /// x with f'(x) = slope (slope < 0), or nullopt when the family has no
    /// closed form. Throws ExpressivityError when the closed form leaves the domain.
    std::optional<double> closed_slope_inverse(double slope) const;

    /// f(x) - f(ref) - f'(ref) (x - ref) >= 0. Second order in (x - ref), so
    /// closed forms avoid the cancellation of the direct expression.
    double gap(double x, double ref) const;

    State state_at(double x) const { return State{x, eval(x)}; }

    const Interval& domain() const { return parts_->domain; }
    const std::string& label() const { return parts_->label; }
    const std::string& spec_json() const { return parts_->spec_json; }
    bool has_closed_inverse() const { return parts_->inverse.has_value(); }
    bool has_default_domain() const { return domain().lo == 0.0 && !domain().bounded_above(); }

    /// Access to the raw callables (wrapping and composition).
    const Parts& parts() const { return *parts_; }

private:
    void check_domain(double x, const char* what) const;
    std::shared_ptr<const Parts> parts_;
};

// ---------------------------------------------------------------- families

/// f(x) = c / x.
Curve make_constant_product(double c);

/// f(x) = c / x^k.
Curve make_constant_power(double c, double k);

/// g(x) = alpha f(x / alpha), i.e. the curve (alpha x, alpha f(x)).
Curve scale_curve(const Curve& base, double alpha);

/// f~(x) = f(x - dx) - dy on the interval where both shifted reserves stay
/// positive. Throws DomainError when that interval is empty.
Curve shift_curve(const Curve& base, double dx, double dy);

/// Same curve, domain intersected with `dom`.
Curve restrict_domain(const Curve& base, const Interval& dom);

/// Natural cubic spline through (ln x_i, ln y_i); domain (x_0, x_n).
/// Knots must be strictly increasing in x with y > 0. Convexity is not
/// enforced here; validate_axioms reports violations.
Curve make_tabulated(std::span<const double> xs, std::span<const double> ys);

/// Curve from user callables. Not serializable.
Curve make_custom(std::string label, RealFn f, RealFn df, RealFn d2f, Interval domain = {});

/// Bracketed inverse of the (decreasing) curve. Throws RangeError when y lies
/// outside the sampled range of f.
double numeric_inverse(const Curve& curve, double y, const Tolerances& tol = {});

// ---------------------------------------------------------------- axioms

struct AxiomViolation {
    double x;
    std::string check;  // "continuity" | "expressivity" | "convexity"
    std::string detail;
};

struct AxiomReport {
    bool continuity_ok = true;
    bool expressivity_ok = true;
    bool convexity_ok = true;
    std::vector<AxiomViolation> violations;
    /// Boundary behaviour f -> inf at the lower end and f -> 0 at infinity;
    /// only assessed for default-domain curves and not one of the three axioms.
    bool boundary_ok = true;
    std::vector<std::string> notes;

    bool ok() const { return continuity_ok && expressivity_ok && convexity_ok; }
};

struct AxiomOptions {
    double min_rate = 1e-6;
    double max_rate = 1e6;
    double deriv_rel_tol = 1e-6;
    double deriv2_rel_tol = 1e-5;
};

/// Sample points inside the curve's domain: a log grid on [1e-3, 1e3] for the
/// default domain, otherwise points spread across the open interval.
std::vector<double> default_grid(const Curve& curve, std::size_t n = 61);

/// Checks the three AMM axioms on `grid` (at least 3 interior points).
AxiomReport validate_axioms(const Curve& curve, std::span<const double> grid,
                            const AxiomOptions& opts = {});
AxiomReport validate_axioms(const Curve& curve, const AxiomOptions& opts = {});

}  // namespace ammcalc
