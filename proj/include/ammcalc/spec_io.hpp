#pragma once

#include "ammcalc/composition.hpp"
#include "ammcalc/curve.hpp"
#include "ammcalc/expectation.hpp"
#include "ammcalc/partition.hpp"

#include <optional>
#include <string>

namespace ammcalc {

/// Inline JSON (first non-space character '{') or a path to a JSON file.
/// Throws SpecError when the file cannot be read.
std::string load_spec_text(const std::string& path_or_inline);

/// Curve spec:
///   {"family": "constant_product", "params": {"c": 1}}
///   {"family": "constant_power",   "params": {"c": 1, "k": 2}}
///   {"family": "scaled",  "params": {"alpha": 2}, "base": <spec>}
///   {"family": "shifted", "base": <spec>, "dx": 0.5, "dy": 1}
///   {"family": "tabulated", "params": {"x": [...], "y": [...]}}
/// with an optional "domain": [lo, hi|null] that restricts the natural domain.
Curve parse_curve_spec(const std::string& text);

/// Serialized spec of a builtin-family curve; throws SpecError for curves
/// built from arbitrary callables.
std::string curve_to_spec(const Curve& curve);

struct CompositionSpec {
    CompositionKind op;
    Curve left;
    double left_anchor;
    Curve right;
    double right_anchor;
};

/// {"op": "seq"|"par", "left": {"curve": <spec>, "anchor": a}, "right": {...}}.
/// The anchor may also sit beside the curve fields of a flat curve spec.
CompositionSpec parse_composition_spec(const std::string& text);

struct PartitionSpec {
    Axis axis = Axis::X;
    /// Anchor reserve x (the Y-axis partition starts at f(anchor)).
    double anchor = 1.0;
    double ratio = 2.0;
    std::size_t count = 60;
    /// Explicit tail bound; when absent and `tail` is true the last point is used.
    std::optional<double> tail_bound;
    bool tail = true;
};

/// {"axis": "X"|"Y", "anchor": a, "ratio": r, "count": n, "tail": true|false|B}.
PartitionSpec parse_partition_spec(const std::string& text);
Partition build_partition(const Curve& curve, const PartitionSpec& spec);

/// "uniform", "beta:a1,a2", or JSON {"kind": "tabulated", "points": [...],
/// "densities": [...]} (inline or a file path).
ValuationDistribution parse_distribution_spec(const std::string& text);

}  // namespace ammcalc
