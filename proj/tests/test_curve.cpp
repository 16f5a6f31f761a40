#include "doctest.h"
#include "support.hpp"

using namespace ammcalc;

TEST_CASE("constant product values") {
    auto f = make_constant_product(1.0);
    CHECK(f.eval(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.eval(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(make_constant_product(4.0).eval(2.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("constant power values and k = 1 reduction") {
    auto p = make_constant_power(1.0, 2.0);
    CHECK(p.eval(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.eval(2.0) == doctest::Approx(0.25).epsilon(1e-15));
    auto cp = make_constant_product(3.0);
    auto k1 = make_constant_power(3.0, 1.0);
    for (double x : log_grid(1e-3, 1e3, 41)) {
        CHECK(oracle::rel(cp.eval(x), k1.eval(x)) < 1e-14);
        CHECK(oracle::rel(cp.deriv(x), k1.deriv(x)) < 1e-14);
    }
}

TEST_CASE("non-positive parameters are rejected") {
    CHECK_THROWS_AS(make_constant_product(0.0), ArgumentError);
    CHECK_THROWS_AS(make_constant_product(-1.0), ArgumentError);
    CHECK_THROWS_AS(make_constant_power(1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_constant_power(-2.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(scale_curve(make_constant_product(1.0), 0.0), ArgumentError);
}

TEST_CASE("scaling") {
    auto f = make_constant_product(1.0);
    auto g1 = scale_curve(f, 1.0);
    for (double x : log_grid(1e-2, 1e2, 21)) {
        CHECK(g1.eval(x) == f.eval(x));
    }
    CHECK(scale_curve(f, 2.0).eval(2.0) == doctest::Approx(2.0).epsilon(1e-14));

    auto g3 = scale_curve(f, 3.0);
    const double h = 1e-4;
    const double lhs = oracle::diff5([&](double x) { return g3.eval(x); }, 6.0, h);
    const double rhs = oracle::diff5([&](double x) { return f.eval(x); }, 2.0, h);
    CHECK(oracle::rel(lhs, rhs) < 1e-9);

    for (const auto& base : oracle::builtin_curves()) {
        for (double alpha : {0.1, 2.0, 7.5}) {
            auto g = scale_curve(base, alpha);
            for (double x : log_grid(1e-2, 1e2, 17)) {
                CHECK(oracle::rel(g.eval(alpha * x), alpha * base.eval(x)) < 1e-12);
            }
        }
    }
}

TEST_CASE("inverse") {
    auto f = make_constant_product(1.0);
    CHECK(numeric_inverse(f, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(numeric_inverse(f, 0.5) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(numeric_inverse(make_constant_power(1.0, 2.0), 4.0) ==
          doctest::Approx(0.5).epsilon(1e-9));

    auto curves = oracle::builtin_curves();
    curves.push_back(oracle::custom_curve());
    for (const auto& c : curves) {
        for (double x : log_grid(1e-3, 1e3, 31)) {
            const double y = c.eval(x);
            CHECK(oracle::rel(c.inverse(y), x) < 1e-9);
            CHECK(oracle::rel(numeric_inverse(c, y), x) < 1e-9);
        }
    }
}

TEST_CASE("inverse outside the range") {
    std::vector<double> xs{0.5, 1.0, 2.0, 4.0};
    std::vector<double> ys{2.0, 1.0, 0.5, 0.25};
    auto t = make_tabulated(xs, ys);
    CHECK_THROWS_AS(numeric_inverse(t, 10.0), RangeError);
    CHECK_THROWS_AS(numeric_inverse(t, 0.01), RangeError);
    CHECK_THROWS_AS(numeric_inverse(make_constant_product(1.0), -1.0), RangeError);
}

TEST_CASE("derivatives agree with finite differences") {
    auto curves = oracle::builtin_curves();
    curves.push_back(oracle::custom_curve());
    curves.push_back(shift_curve(make_constant_product(1.0), 0.5, 1.0));
    {
        std::vector<double> xs, ys;
        for (double x : log_grid(0.05, 20.0, 40)) {
            xs.push_back(x);
            ys.push_back(1.0 / x + 0.1 / (x * x));
        }
        curves.push_back(make_tabulated(xs, ys));
    }
    for (const auto& c : curves) {
        for (double x : default_grid(c, 25)) {
            const double h = 1e-4 * std::min(x - c.domain().lo, std::max(x, 1.0));
            if (!c.domain().contains(x - 2 * h) || !c.domain().contains(x + 2 * h)) {
                continue;
            }
            const double d1 = oracle::diff5([&](double u) { return c.eval(u); }, x, h);
            const double d2 = oracle::diff5([&](double u) { return c.deriv(u); }, x, h);
            CHECK_MESSAGE(oracle::rel(c.deriv(x), d1) < 1e-6, c.label() << " x=" << x);
            CHECK_MESSAGE(oracle::rel(c.deriv2(x), d2) < 1e-5, c.label() << " x=" << x);
        }
    }
}

TEST_CASE("evaluation outside the domain") {
    auto f = make_constant_product(1.0);
    CHECK_THROWS_AS(f.eval(0.0), DomainError);
    CHECK_THROWS_AS(f.eval(-1.0), DomainError);
    auto s = shift_curve(f, 0.5, 1.0);
    CHECK_THROWS_AS(s.eval(1.5), DomainError);
    CHECK_THROWS_AS(s.deriv(0.4), DomainError);
}

TEST_CASE("tangent gap") {
    for (const auto& c : oracle::builtin_curves()) {
        for (double x : {0.3, 1.0, 4.0}) {
            for (double r : {0.5, 2.0}) {
                const double direct = c.eval(x) - c.eval(r) - c.deriv(r) * (x - r);
                CHECK(c.gap(x, r) >= 0.0);
                CHECK(oracle::rel(c.gap(x, r), direct) < 1e-10);
            }
        }
        CHECK(c.gap(1.3, 1.3) == 0.0);
    }
    // Second-order accuracy where the direct form cancels.
    auto f = make_constant_product(1.0);
    const double x = 1.0 + 1e-7;
    const double d = x - 1.0;  // exact
    CHECK(oracle::rel(f.gap(x, 1.0), d * d / x) < 1e-12);
}

TEST_CASE("axioms hold for builtin families") {
    auto curves = oracle::builtin_curves();
    curves.push_back(make_constant_power(1.0, 2.0));
    for (const auto& c : curves) {
        const auto r = validate_axioms(c);
        CHECK_MESSAGE(r.ok(), c.label());
        CHECK(r.violations.empty());
        CHECK(r.boundary_ok);
    }
}

TEST_CASE("linear curve fails expressivity") {
    auto lin = make_custom(
        "linear", [](double x) { return 1.0 - x; }, [](double) { return -1.0; },
        [](double) { return 0.0; }, Interval{0.0, 1.0});
    const auto r = validate_axioms(lin);
    CHECK_FALSE(r.expressivity_ok);
    bool named = false;
    for (const auto& v : r.violations) {
        named |= v.check == "expressivity";
    }
    CHECK(named);
}

TEST_CASE("non-convex samples fail convexity") {
    // log-log concave bump between 1 and 4.
    std::vector<double> xs{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> ys{4.0, 2.0, 1.8, 1.7, 0.25, 0.125};
    const auto r = validate_axioms(make_tabulated(xs, ys));
    CHECK_FALSE(r.convexity_ok);
    bool named = false;
    for (const auto& v : r.violations) {
        named |= v.check == "convexity";
    }
    CHECK(named);
}

TEST_CASE("increasing curve fails continuity") {
    auto inc = make_custom(
        "increasing", [](double x) { return x; }, [](double) { return 1.0; },
        [](double) { return 0.0; });
    const auto r = validate_axioms(inc);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.violations.empty());
}

TEST_CASE("short grids are rejected") {
    auto f = make_constant_product(1.0);
    std::vector<double> g{1.0, 2.0};
    CHECK_THROWS_AS(validate_axioms(f, g), ArgumentError);
}

TEST_CASE("flags and violations agree") {
    std::vector<double> xs{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> ys{4.0, 2.0, 1.8, 1.7, 0.25, 0.125};
    for (const auto& c : {make_constant_product(1.0), make_tabulated(xs, ys)}) {
        const auto r = validate_axioms(c);
        CHECK(r.ok() == r.violations.empty());
    }
}

TEST_CASE("tabulated curves") {
    std::vector<double> xs{0.5, 1.0, 2.0, 4.0};
    std::vector<double> ys{2.0, 1.0, 0.5, 0.25};
    auto t = make_tabulated(xs, ys);
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        CHECK(oracle::rel(t.eval(xs[i]), ys[i]) < 1e-14);
    }
    CHECK(t.domain().lo == 0.5);
    CHECK(t.domain().hi == 4.0);
    // 1/x is a line in log-log coordinates, so the spline is exact.
    CHECK(oracle::rel(t.eval(1.7), 1.0 / 1.7) < 1e-12);
    CHECK(oracle::rel(t.deriv(1.7), -1.0 / (1.7 * 1.7)) < 1e-12);

    std::vector<double> bad_x{1.0, 0.5, 2.0};
    std::vector<double> bad_y{1.0, 2.0, 0.5};
    CHECK_THROWS_AS(make_tabulated(bad_x, bad_y), ArgumentError);
    std::vector<double> neg_y{1.0, -1.0, 0.5};
    std::vector<double> ok_x{0.5, 1.0, 2.0};
    CHECK_THROWS_AS(make_tabulated(ok_x, neg_y), ArgumentError);
}

TEST_CASE("shifted curve domain") {
    auto s = shift_curve(make_constant_product(1.0), 0.5, 1.0);
    CHECK(s.domain().lo == doctest::Approx(0.5));
    CHECK(s.domain().hi == doctest::Approx(1.5));
    CHECK(s.eval(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.deriv(1.0) == doctest::Approx(-4.0).epsilon(1e-14));
}
