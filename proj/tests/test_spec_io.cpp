#include "doctest.h"
#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ammcalc;

TEST_CASE("builtin families") {
    auto cp = parse_curve_spec(R"({"family": "constant_product", "params": {"c": 2}})");
    CHECK(cp.eval(2.0) == doctest::Approx(1.0));
    auto pw = parse_curve_spec(R"({"family": "constant_power", "params": {"c": 1, "k": 2}})");
    CHECK(pw.eval(2.0) == doctest::Approx(0.25));
    auto sc = parse_curve_spec(
        R"({"family": "scaled", "params": {"alpha": 2},
            "base": {"family": "constant_product", "params": {"c": 1}}})");
    CHECK(sc.eval(2.0) == doctest::Approx(2.0));
    auto sh = parse_curve_spec(
        R"({"family": "shifted", "dx": 0.5, "dy": 1,
            "base": {"family": "constant_product", "params": {"c": 1}}})");
    CHECK(sh.eval(1.0) == doctest::Approx(1.0));
    CHECK(sh.domain().hi == doctest::Approx(1.5));
    auto tb = parse_curve_spec(
        R"({"family": "tabulated", "params": {"x": [0.5, 1, 2, 4], "y": [2, 1, 0.5, 0.25]}})");
    CHECK(tb.eval(1.5) == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("domain restriction") {
    auto c = parse_curve_spec(
        R"({"family": "constant_product", "params": {"c": 1}, "domain": [0.5, 3]})");
    CHECK(c.domain().lo == 0.5);
    CHECK(c.domain().hi == 3.0);
    auto open = parse_curve_spec(
        R"({"family": "constant_product", "params": {"c": 1}, "domain": [0.5, null]})");
    CHECK_FALSE(open.domain().bounded_above());
    CHECK_THROWS_AS(open.eval(0.4), DomainError);
}

TEST_CASE("round trip") {
    std::vector<Curve> curves = oracle::builtin_curves();
    curves.push_back(shift_curve(make_constant_product(1.0), 0.5, 1.0));
    curves.push_back(restrict_domain(make_constant_power(1.0, 2.0), Interval{0.2, 7.0}));
    for (const auto& c : curves) {
        const auto again = parse_curve_spec(curve_to_spec(c));
        CHECK(again.domain().lo == c.domain().lo);
        CHECK(again.domain().hi == c.domain().hi);
        for (double x : default_grid(c, 15)) {
            CHECK(again.eval(x) == c.eval(x));
            CHECK(again.deriv(x) == c.deriv(x));
        }
    }
    CHECK_THROWS_AS(curve_to_spec(oracle::custom_curve()), SpecError);
}

TEST_CASE("malformed curve specs") {
    CHECK_THROWS_AS(parse_curve_spec("{not json"), SpecError);
    CHECK_THROWS_AS(parse_curve_spec(R"({"family": "hyperbolic", "params": {}})"), SpecError);
    CHECK_THROWS_AS(parse_curve_spec(R"({"family": "constant_power", "params": {"c": 1}})"),
                    SpecError);
    CHECK_THROWS_AS(parse_curve_spec(R"({"family": "constant_product", "params": {"c": -1}})"),
                    SpecError);
    CHECK_THROWS_AS(parse_curve_spec(R"({"params": {"c": 1}})"), SpecError);
    CHECK_THROWS_AS(
        parse_curve_spec(R"({"family": "constant_product", "params": {"c": "one"}})"), SpecError);
    CHECK_THROWS_AS(load_spec_text("/nonexistent/curve.json"), SpecError);
}

TEST_CASE("spec files") {
    const auto path = std::filesystem::temp_directory_path() / "ammcalc_spec_io_test.json";
    {
        std::ofstream out(path);
        out << R"({"family": "constant_product", "params": {"c": 9}})";
    }
    const auto c = parse_curve_spec(load_spec_text(path.string()));
    CHECK(c.eval(3.0) == doctest::Approx(3.0));
    std::filesystem::remove(path);
}

TEST_CASE("composition specs") {
    const auto nested = parse_composition_spec(R"({"op": "seq",
        "left": {"curve": {"family": "constant_product", "params": {"c": 1}}, "anchor": 1},
        "right": {"curve": {"family": "constant_product", "params": {"c": 4}}, "anchor": 2}})");
    CHECK(nested.op == CompositionKind::Sequential);
    CHECK(nested.left_anchor == 1.0);
    CHECK(nested.right_anchor == 2.0);
    CHECK(nested.right.eval(2.0) == doctest::Approx(2.0));
    const auto flat = parse_composition_spec(R"({"op": "par",
        "left": {"family": "constant_product", "params": {"c": 1}, "anchor": 1},
        "right": {"family": "constant_power", "params": {"c": 1, "k": 2}, "anchor": 3}})");
    CHECK(flat.op == CompositionKind::Parallel);
    CHECK(flat.right_anchor == 3.0);
    CHECK_THROWS_AS(parse_composition_spec(R"({"op": "sum", "left": {}, "right": {}})"),
                    SpecError);
    CHECK_THROWS_AS(parse_composition_spec(R"({"op": "seq"})"), SpecError);
}

TEST_CASE("partition specs") {
    const auto s = parse_partition_spec(R"({"axis": "Y", "anchor": 2, "ratio": 3, "count": 10})");
    CHECK(s.axis == Axis::Y);
    CHECK(s.anchor == 2.0);
    CHECK(s.ratio == 3.0);
    CHECK(s.count == 10);
    const auto P = build_partition(make_constant_product(1.0), s);
    CHECK(P.points.front() == doctest::Approx(0.5));
    const auto t = parse_partition_spec(R"({"axis": "X", "anchor": 1, "tail": 1e6})");
    REQUIRE(t.tail_bound.has_value());
    CHECK(*t.tail_bound == 1e6);
    CHECK_FALSE(parse_partition_spec(R"({"tail": false})").tail);
    CHECK_THROWS_AS(parse_partition_spec(R"({"axis": "Z"})"), SpecError);
    CHECK_THROWS_AS(parse_partition_spec(R"({"ratio": 1})"), SpecError);
    CHECK_THROWS_AS(parse_partition_spec(R"({"count": -3})"), SpecError);
}

TEST_CASE("distribution specs") {
    CHECK(parse_distribution_spec("uniform").kind() == ValuationDistribution::Kind::Uniform);
    const auto b = parse_distribution_spec("beta:2,5");
    CHECK(b.kind() == ValuationDistribution::Kind::Beta);
    CHECK(b.alpha1() == 2.0);
    CHECK(b.alpha2() == 5.0);
    const auto t = parse_distribution_spec(
        R"({"kind": "tabulated", "points": [0, 0.5, 1], "densities": [0, 2, 0]})");
    CHECK(t.kind() == ValuationDistribution::Kind::Tabulated);
    CHECK(t.pdf(0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(parse_distribution_spec("beta:x,2"), SpecError);
    CHECK_THROWS_AS(parse_distribution_spec("gamma:2"), SpecError);
}
