#pragma once

#include "ammcalc/curve.hpp"

#include <optional>
#include <vector>

namespace ammcalc {

enum class Axis { X, Y };

/// Non-decreasing reserve levels starting at the anchor (x1 = a on the X
/// axis, y1 = f(a) on the Y axis), optionally followed by a tail bound B.
/// Repeated points are allowed and contribute nothing.
struct Partition {
    Axis axis = Axis::X;
    std::vector<double> points;
    std::optional<double> tail;
};

/// points[i] = anchor_reserve * ratio^i for i < count; the anchor reserve is
/// a on the X axis and f(a) on the Y axis. Tail bound, if requested, is the
/// last point.
Partition geometric_partition(const Curve& curve, Axis axis, double anchor, double ratio,
                              std::size_t count, bool with_tail = true);

struct PartitionTotal {
    double total = 0.0;  // finite sum plus tail term
    std::vector<double> terms;
    double tail_term = 0.0;
    /// Bound on |remaining loss beyond the last point - tail_term|: the
    /// remaining drainable reserve at the last point.
    double tail_error = 0.0;
};

/// Sum of divloss*(r_i, r_{i+1}) over consecutive levels (reserves mapped to
/// x for the Y axis), plus divloss*(r_last, 1000 B) when a tail is given.
/// Throws ArgumentError when the partition is malformed.
PartitionTotal total_divloss_partition(const Curve& curve, const Partition& P);

struct PartitionBounds {
    PartitionTotal total;
    double anchor_x = 0.0;
    /// cap(v; A) at the anchor's valuation.
    double lower = 0.0;
    /// f(a) for the X axis, a for the Y axis.
    double upper = 0.0;
    bool terms_nonnegative = true;
    bool upper_ok = true;
    bool lower_ok = true;
    /// The bounds that always hold: nonnegative terms and total <= upper.
    bool proven_ok() const { return terms_nonnegative && upper_ok; }
};

PartitionBounds check_partition_bounds(const Curve& curve, const Partition& P,
                                       double tol = 1e-9);

struct Conservation {
    double x_star = 0.0;
    double l_x = 0.0;
    double l_y = 0.0;
    double sum = 0.0;
    /// 2 cap(v*) = 2 x*.
    double target = 0.0;
    double tail_error = 0.0;
};

/// Totals for canonical geometric X and Y partitions anchored at the fixed
/// point x* = f(x*).
Conservation conservation_at_fixed_point(const Curve& curve, double ratio = 2.0,
                                         std::size_t count = 60);

}  // namespace ammcalc
