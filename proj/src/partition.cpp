#include "ammcalc/partition.hpp"

#include "ammcalc/errors.hpp"
#include "ammcalc/measures.hpp"

#include <cmath>
#include <sstream>

namespace ammcalc {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double to_x(const Curve& curve, Axis axis, double r) {
    return axis == Axis::X ? r : curve.inverse(r, kTightTol);
}

void validate(const Curve& curve, const Partition& P) {
    if (P.points.empty()) {
        throw ArgumentError("partition: no points");
    }
    for (std::size_t i = 0; i < P.points.size(); ++i) {
        const double r = P.points[i];
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw ArgumentError("partition: point " + num(r) + " is not a positive reserve");
        }
        if (i > 0 && r < P.points[i - 1]) {
            throw ArgumentError("partition: points must be non-decreasing (index " +
                                std::to_string(i) + ")");
        }
    }
    if (P.tail && !(*P.tail >= P.points.back())) {
        throw ArgumentError("partition: tail bound " + num(*P.tail) + " below the last point " +
                            num(P.points.back()));
    }
    to_x(curve, P.axis, P.points.front());
}

}  // namespace

Partition geometric_partition(const Curve& curve, Axis axis, double anchor, double ratio,
                              std::size_t count, bool with_tail) {
    if (!(ratio > 1.0) || count < 1) {
        throw ArgumentError("geometric_partition: need ratio > 1 and count >= 1");
    }
    Partition P;
    P.axis = axis;
    double r = axis == Axis::X ? anchor : curve.eval(anchor);
    for (std::size_t i = 0; i < count; ++i, r *= ratio) {
        P.points.push_back(r);
    }
    if (with_tail) {
        P.tail = P.points.back();
    }
    return P;
}

PartitionTotal total_divloss_partition(const Curve& curve, const Partition& P) {
    validate(curve, P);
    PartitionTotal out;
    double prev = to_x(curve, P.axis, P.points.front());
    for (std::size_t i = 1; i < P.points.size(); ++i) {
        const double x = to_x(curve, P.axis, P.points[i]);
        const double term = x == prev ? 0.0 : divergence_loss_trade(curve, prev, x);
        out.terms.push_back(term);
        out.total += term;
        prev = x;
    }
    if (P.tail) {
        const double far = to_x(curve, P.axis, 1e3 * *P.tail);
        out.tail_term = far == prev ? 0.0 : divergence_loss_trade(curve, prev, far);
        out.total += out.tail_term;
        out.tail_error = P.axis == Axis::X ? curve.eval(prev) : prev;
    }
    return out;
}

PartitionBounds check_partition_bounds(const Curve& curve, const Partition& P, double tol) {
    PartitionBounds b;
    b.total = total_divloss_partition(curve, P);
    b.anchor_x = to_x(curve, P.axis, P.points.front());
    const double fa = curve.eval(b.anchor_x);
    b.lower = capitalization(curve, b.anchor_x, valuation_of(curve, b.anchor_x));
    b.upper = P.axis == Axis::X ? fa : b.anchor_x;
    for (double t : b.total.terms) {
        b.terms_nonnegative = b.terms_nonnegative && t >= 0.0;
    }
    b.terms_nonnegative = b.terms_nonnegative && b.total.tail_term >= 0.0;
    const double slack = tol * std::max(1.0, b.upper);
    b.upper_ok = b.total.total <= b.upper + slack;
    b.lower_ok = b.total.total + b.total.tail_error >= b.lower - slack;
    return b;
}

Conservation conservation_at_fixed_point(const Curve& curve, double ratio, std::size_t count) {
    Conservation c;
    c.x_star = fixed_point(curve);
    const auto px = total_divloss_partition(curve, geometric_partition(curve, Axis::X, c.x_star,
                                                                       ratio, count));
    const auto py = total_divloss_partition(curve, geometric_partition(curve, Axis::Y, c.x_star,
                                                                       ratio, count));
    c.l_x = px.total;
    c.l_y = py.total;
    c.sum = c.l_x + c.l_y;
    c.target = 2.0 * capitalization_at_stable(curve, max_cap_valuation(curve));
    c.tail_error = px.tail_error + py.tail_error;
    return c;
}

}  // namespace ammcalc
