#include "doctest.h"
#include "support.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <numbers>

using namespace ammcalc;
using oracle::ld;

namespace {

const Curve kCp = make_constant_product(1.0);

double ts(const std::function<double(double)>& f, double lo, double hi) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, lo, hi, 1e-12);
}

/// Load of c/x from v0 to v, X variant below v0 and Y variant above.
double cp_load(double v0, double v) {
    const ld x0 = oracle::power_phi(1, 1, v0), x = oracle::power_phi(1, 1, v);
    const ld y0 = 1 / x0, y = 1 / x;
    const ld dl = v * (x0 - x) + (1 - v) * (y0 - y);
    const ld gain = v0 * (x - x0) + (1 - v0) * (y - y0);
    const ld ls = v < v0 ? (1 - v) / (1 - v0) * gain : v / v0 * gain;
    return static_cast<double>(dl * ls);
}

}  // namespace

TEST_CASE("beta density") {
    CHECK(beta_pdf(1, 1, 0.3) == doctest::Approx(1.0));
    CHECK(beta_pdf(2, 2, 0.5) == doctest::Approx(1.5));
    CHECK(beta_pdf(2, 2, 1.5) == 0.0);
    CHECK(ts([](double v) { return beta_pdf(3, 2, v); }, 0, 1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(ValuationDistribution::beta(0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(ValuationDistribution::beta(1.0, -2.0), ArgumentError);
}

TEST_CASE("tabulated distributions") {
    auto d = ValuationDistribution::tabulated({0.0, 0.5, 1.0}, {1.0, 3.0, 1.0});
    CHECK(ts([&](double v) { return d.pdf(v); }, 0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.pdf(0.5) == doctest::Approx(1.5));
    CHECK_THROWS_AS(ValuationDistribution::tabulated({0.0, 1.0}, {1.0, -1.0}), ArgumentError);
    CHECK_THROWS_AS(ValuationDistribution::tabulated({0.5, 0.2, 1.0}, {1.0, 1.0, 1.0}),
                    ArgumentError);
    CHECK_THROWS_AS(ValuationDistribution::tabulated({0.0, 1.0}, {0.0, 0.0}), ArgumentError);
}

TEST_CASE("quadrature") {
    CHECK(integrate([](double x) { return std::pow(x, 5); }, 0, 1).value ==
          doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    const auto r = integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    std::vector<double> bp{0.0, 0.3, 1.0};
    CHECK(integrate([](double x) { return std::abs(x - 0.3); }, bp).value ==
          doctest::Approx(0.045 + 0.245).epsilon(1e-14));

    QuadratureOptions tight{1e-14, 1e-14, 2};
    const auto f = [](double x) { return std::sin(1000 * x); };
    CHECK_FALSE(integrate(f, 0, 1, tight).converged);
    std::vector<double> lim{0.0, 1.0};
    try {
        integrate_checked(f, lim, tight);
        FAIL("expected a quadrature error");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.value()));
        CHECK(e.error_estimate() > 1e-14);
    }
}

TEST_CASE("measure kinds") {
    CHECK(parse_measure_kind("load") == MeasureKind::Load);
    CHECK(parse_measure_kind("linslip") == MeasureKind::Linslip);
    CHECK(parse_measure_kind("divloss") == MeasureKind::Divloss);
    CHECK(to_string(MeasureKind::Divloss) == "divloss");
    CHECK_THROWS_AS(parse_measure_kind("slippage"), ArgumentError);
}

TEST_CASE("expected divergence loss and load match an independent quadrature") {
    const auto u = ValuationDistribution::uniform();
    const auto edl = expected_measure(kCp, Valuation(0.5), u, MeasureKind::Divloss);
    const double dl_ref =
        ts([](double v) { return double(oracle::power_divloss(1, 1, 0.5, v)); }, 0, 1);
    CHECK(std::abs(edl.value - dl_ref) < 1e-8);
    CHECK(edl.value == doctest::Approx(1 - std::numbers::pi / 4).epsilon(1e-8));

    for (double a : {2.0, 3.0, 4.0}) {
        const auto p = ValuationDistribution::beta(a, a + 1);
        const auto e = expected_measure(kCp, Valuation(0.5), p, MeasureKind::Load);
        const double ref = ts([&](double v) { return beta_pdf(a, a + 1, v) * cp_load(0.5, v); },
                              0, 0.5) +
                           ts([&](double v) { return beta_pdf(a, a + 1, v) * cp_load(0.5, v); },
                              0.5, 1);
        CHECK(std::abs(e.value - ref) < 1e-7);
    }
}

TEST_CASE("expected capitalization") {
    const auto u = ValuationDistribution::uniform();
    CHECK(expected_capitalization(kCp, u).value ==
          doctest::Approx(std::numbers::pi / 4).epsilon(1e-9));
    const auto narrow = ValuationDistribution::tabulated({0.495, 0.5, 0.505}, {0.0, 1.0, 0.0});
    CHECK(expected_capitalization(kCp, narrow).value == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(expected_measure(kCp, Valuation(0.5), narrow, MeasureKind::Divloss).value < 1e-4);
    double prev = 0.0;
    for (double a : {1.0, 2.0, 4.0, 8.0}) {
        const double e =
            expected_capitalization(kCp, ValuationDistribution::beta(a, a)).value;
        CHECK(e > prev);
        CHECK(e < 1.0);
        prev = e;
    }
}

TEST_CASE("expected load orderings") {
    const Valuation v0(0.5);
    auto el = [&](double a1, double a2) {
        return expected_measure(kCp, v0, ValuationDistribution::beta(a1, a2), MeasureKind::Load)
            .value;
    };
    CHECK(el(4, 4) < el(1, 1));
    CHECK(el(4, 1) > el(4, 4));
    CHECK(el(1, 4) > el(4, 4));
}

TEST_CASE("expected load surface") {
    const std::vector<double> alphas{1, 2, 3, 4};
    const auto t0 = std::chrono::steady_clock::now();
    const auto s1 = expected_load_surface(kCp, Valuation(0.5), alphas, 1);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 60.0);
    REQUIRE(s1.size() == 16);
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(s1[i * 4 + i].expected_load < s1[(i - 1) * 4 + (i - 1)].expected_load);
    }
    // Symmetric pool at 1/2: beta(a, b) and beta(b, a) carry the same load.
    CHECK(s1[3].expected_load == doctest::Approx(s1[12].expected_load).epsilon(1e-7));
    const auto s3 = expected_load_surface(kCp, Valuation(0.5), alphas, 3);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].alpha1 == s3[i].alpha1);
        CHECK(s1[i].alpha2 == s3[i].alpha2);
        CHECK(s1[i].expected_load == s3[i].expected_load);
    }
}
