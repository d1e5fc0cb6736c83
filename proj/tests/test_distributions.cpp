// test_distributions.cpp
//
// Densities, CDFs and quantiles of the four worth families, plus the
// accuracy of the standard-normal primitives against mpmath golden values.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "optistop/distributions.hpp"
#include "optistop/errors.hpp"
#include "oracles/golden_values.hpp"
#include "oracles/quadrature.hpp"

using namespace optistop;
using Catch::Approx;

namespace {

std::vector<DistributionSpec> all_families() {
    return {DistributionSpec::standard_normal(), DistributionSpec::normal(5.0, 2.0),
            DistributionSpec::uniform(0.0, 4.0), DistributionSpec::uniform(-1.0, 1.0),
            DistributionSpec::pareto(2.0), DistributionSpec::pareto(0.5)};
}

}  // namespace

TEST_CASE("pdf examples", "[distributions]") {
    CHECK(pdf(DistributionSpec::standard_normal(), 0.0) == Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(pdf(DistributionSpec::uniform(0.0, 2.0), 1.0) == 0.5);
    CHECK(pdf(DistributionSpec::pareto(2.0), 2.0) == Approx(0.25).epsilon(1e-15));

    SECTION("zero outside the support") {
        CHECK(pdf(DistributionSpec::uniform(0.0, 2.0), -0.1) == 0.0);
        CHECK(pdf(DistributionSpec::uniform(0.0, 2.0), 2.1) == 0.0);
        CHECK(pdf(DistributionSpec::pareto(2.0), 0.5) == 0.0);
    }
}

TEST_CASE("cdf examples", "[distributions]") {
    CHECK(cdf(DistributionSpec::standard_normal(), 0.0) == 0.5);
    CHECK(cdf(DistributionSpec::uniform(0.0, 1.0), 0.3) == Approx(0.3).epsilon(1e-15));
    CHECK(cdf(DistributionSpec::pareto(1.0), 2.0) == Approx(0.5).epsilon(1e-15));

    SECTION("clamps outside the support") {
        CHECK(cdf(DistributionSpec::uniform(0.0, 1.0), -3.0) == 0.0);
        CHECK(cdf(DistributionSpec::uniform(0.0, 1.0), 3.0) == 1.0);
        CHECK(cdf(DistributionSpec::pareto(3.0), 1.0) == 0.0);
    }
}

TEST_CASE("quantile examples", "[distributions]") {
    CHECK(quantile(DistributionSpec::standard_normal(), 0.5) == Approx(0.0).margin(1e-16));
    CHECK(quantile(DistributionSpec::uniform(0.0, 4.0), 0.25) == 1.0);
    CHECK(quantile(DistributionSpec::pareto(2.0), 0.75) == Approx(2.0).epsilon(1e-15));
    CHECK(quantile(DistributionSpec::normal(5.0, 2.0), 0.5) == Approx(5.0).epsilon(1e-15));
}

TEST_CASE("quantile rejects probabilities outside (0, 1)", "[distributions][errors]") {
    for (const auto& spec : all_families()) {
        CHECK_THROWS_AS(quantile(spec, 0.0), DomainError);
        CHECK_THROWS_AS(quantile(spec, 1.0), DomainError);
        CHECK_THROWS_AS(quantile(spec, -0.5), DomainError);
        CHECK_THROWS_AS(quantile(spec, std::nan("")), DomainError);
        CHECK_THROWS_AS(quantile_upper(spec, 0.0), DomainError);
    }
}

TEST_CASE("parameter validation names the field", "[distributions][errors]") {
    auto field_of = [](auto&& make) {
        try {
            make();
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of([] { return DistributionSpec::normal(0.0, 0.0); }) == "spread");
    CHECK(field_of([] { return DistributionSpec::normal(0.0, -1.0); }) == "spread");
    CHECK(field_of([] { return DistributionSpec::uniform(1.0, 1.0); }) == "hi");
    CHECK(field_of([] { return DistributionSpec::pareto(0.0); }) == "alpha");
    CHECK(field_of([] { return DistributionSpec::pareto(-2.0); }) == "alpha");
}

TEST_CASE("cdf(quantile(u)) round trip", "[distributions][property]") {
    for (const auto& spec : all_families()) {
        for (int i = 1; i < 1000; ++i) {
            const double u = i / 1000.0;
            const double x = quantile(spec, u);
            // relative where magnitudes are large (Pareto alpha = 0.5 reaches 1e6)
            const double tol = 1e-10 * std::max(1.0, std::fabs(x) * pdf(spec, x));
            INFO(spec.family() << " u=" << u);
            CHECK(std::fabs(cdf(spec, x) - u) < tol);
        }
        for (double q : {1e-3, 1e-6, 1e-9, 1e-12}) {
            const double x = quantile_upper(spec, q);
            // bounded supports lose relative precision near hi when x is rounded
            const double tol = std::max(1e-10 * q, 4e-16 * std::fabs(x) * pdf(spec, x));
            INFO(spec.family() << " q=" << q);
            CHECK(std::fabs(sf(spec, x) - q) < tol);
        }
    }
}

TEST_CASE("pdf integrates to one", "[distributions][property]") {
    using oracle::simpson;
    CHECK(simpson([](double x) { return pdf(DistributionSpec::standard_normal(), x); }, -12.0, 12.0, 20000) ==
          Approx(1.0).margin(1e-8));
    CHECK(simpson([](double x) { return pdf(DistributionSpec::normal(5.0, 2.0), x); }, -19.0, 29.0, 20000) ==
          Approx(1.0).margin(1e-8));
    CHECK(simpson([](double x) { return pdf(DistributionSpec::uniform(-1.0, 1.0), x); }, -1.0, 1.0, 2000) ==
          Approx(1.0).margin(1e-8));
    // Pareto: substitute x = 1/s on (0, 1], dx = ds / s^2.
    for (double alpha : {2.0, 3.0, 4.5}) {
        const auto spec = DistributionSpec::pareto(alpha);
        const double mass = simpson(
            [&](double s) { return s <= 0.0 ? 0.0 : pdf(spec, 1.0 / s) / (s * s); }, 0.0, 1.0, 20000);
        INFO("alpha=" << alpha);
        CHECK(mass == Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("cdf is nondecreasing across the support", "[distributions][property]") {
    for (const auto& spec : all_families()) {
        const double lo = std::isfinite(support_lower(spec)) ? support_lower(spec) - 1.0 : quantile(spec, 1e-12);
        const double hi = std::isfinite(support_upper(spec)) ? support_upper(spec) + 1.0 : quantile_upper(spec, 1e-12);
        double previous = cdf(spec, lo);
        CHECK(previous >= 0.0);
        for (int i = 1; i <= 10000; ++i) {
            const double x = lo + (hi - lo) * i / 10000.0;
            const double p = cdf(spec, x);
            REQUIRE(p >= previous);
            previous = p;
        }
        CHECK(previous <= 1.0);
    }
    CHECK(cdf(DistributionSpec::standard_normal(), -INFINITY) == 0.0);
    CHECK(cdf(DistributionSpec::standard_normal(), INFINITY) == 1.0);
}

TEST_CASE("standard normal CDF matches golden values to 1e-12", "[distributions][golden]") {
    for (const auto& g : golden::kNormalCdf) {
        INFO("x=" << g.arg);
        CHECK(std::fabs(normal_cdf(g.arg) - g.value) <= 1e-12);
        // the upper tail keeps relative accuracy as well
        CHECK(normal_sf(-g.arg) == Approx(g.value).epsilon(1e-13));
    }
}

TEST_CASE("standard normal quantile matches golden values", "[distributions][golden]") {
    for (const auto& g : golden::kNormalQuantile) {
        INFO("u=" << g.arg);
        const double x = normal_quantile(g.arg);
        if (std::fabs(g.value) <= 8.0) {
            CHECK(std::fabs(x - g.value) <= 1e-12);
        } else {
            CHECK(x == Approx(g.value).epsilon(1e-13));
        }
        CHECK(normal_quantile_upper(g.arg) == Approx(-g.value).epsilon(1e-13).margin(1e-15));
    }
}

TEST_CASE("symmetric families are flagged", "[distributions]") {
    CHECK(is_symmetric(DistributionSpec::standard_normal()));
    CHECK(is_symmetric(DistributionSpec::uniform(-1.0, 1.0)));
    CHECK_FALSE(is_symmetric(DistributionSpec::pareto(2.0)));
    CHECK(has_finite_mean(DistributionSpec::pareto(1.5)));
    CHECK_FALSE(has_finite_mean(DistributionSpec::pareto(1.0)));
    CHECK_FALSE(has_finite_variance(DistributionSpec::pareto(2.0)));
    CHECK(mean(DistributionSpec::pareto(2.0)) == 2.0);
}
