// test_mc_oracle.cpp

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "optistop/errors.hpp"
#include "optistop/mc_oracle.hpp"
#include "optistop/order_stats.hpp"
#include "optistop/sequential_advisor.hpp"

using namespace optistop;

namespace {

bool within(const McEstimate& e, double target, double k = 3.0) { return std::fabs(e.mean - target) < k * e.std_error; }

bool bit_equal(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

bool has_flag(const McEstimate& e, const std::string& f) {
    return std::find(e.flags.begin(), e.flags.end(), f) != e.flags.end();
}

}  // namespace

TEST_CASE("philox known-answer vectors", "[mc]") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
}

TEST_CASE("trial streams", "[mc]") {
    TrialStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 50; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(u != c.uniform());
        CHECK(u != d.uniform());
    }
}

TEST_CASE("bit-identical across worker counts", "[mc][determinism]") {
    const NoisyModel m(1, 3, 4);
    for (auto trials : {std::int64_t{1000}, std::int64_t{123457}, std::int64_t{400000}}) {
        const auto one = simulate_selection(m, 5, trials, 99, 1);
        for (unsigned w : {4u, 16u}) {
            const auto many = simulate_selection(m, 5, trials, 99, w);
            CHECK(bit_equal(one.mean, many.mean));
            CHECK(bit_equal(one.std_error, many.std_error));
        }
        const auto e1 = simulate_expected_max(DistributionSpec::pareto(3), 4, trials, 5, 1);
        const auto e16 = simulate_expected_max(DistributionSpec::pareto(3), 4, trials, 5, 16);
        CHECK(bit_equal(e1.mean, e16.mean));
        const auto p1 = simulate_policy(m, CostModel(0.5), OneMoreLookahead{20}, trials, 11, 1);
        const auto p4 = simulate_policy(m, CostModel(0.5), OneMoreLookahead{20}, trials, 11, 4);
        CHECK(bit_equal(p1.mean, p4.mean));
    }
    CHECK_FALSE(bit_equal(simulate_selection(m, 5, 10000, 1).mean, simulate_selection(m, 5, 10000, 2).mean));
}

TEST_CASE("simulate_expected_max examples", "[mc]") {
    const auto u = simulate_expected_max(DistributionSpec::uniform(0, 1), 4, 1'000'000, 1);
    CHECK(within(u, 0.8));
    CHECK(u.trials == 1'000'000);
    CHECK(u.seed == 1);
    for (const auto& spec : {DistributionSpec::standard_normal(), DistributionSpec::normal(-2, 3),
                             DistributionSpec::uniform(2, 5), DistributionSpec::pareto(4)}) {
        INFO(spec.family());
        CHECK(within(simulate_expected_max(spec, 1, 1'000'000, 2), mean(spec)));
    }
    CHECK(within(simulate_expected_max(DistributionSpec::standard_normal(), 2, 10'000'000, 3), 1 / std::sqrt(std::numbers::pi)));
}

TEST_CASE("simulate_selection examples", "[mc]") {
    CHECK(within(simulate_selection(NoisyModel(0, 1, 0), 10, 10'000'000, 4), rankit(10)));
    const auto single = simulate_selection(NoisyModel(0, 2, 1), 1, 100'000, 5);
    CHECK(within(single, 0.0));
    CHECK(within(simulate_selection(NoisyModel(0, 3, 4), 10, 10'000'000, 6), 0.6 * 3 * rankit(10)));
}

TEST_CASE("simulate_one_more examples", "[mc]") {
    CHECK(within(simulate_one_more(NoisyModel(0, 1, 0), 0.0, 10'000'000, 7), 1 / std::sqrt(2 * std::numbers::pi)));
    const auto far = simulate_one_more(NoisyModel(0, 1, 0), 8.0, 100'000, 8);
    CHECK(far.mean < 1e-9);
    CHECK(within(simulate_one_more(NoisyModel(0, 3, 4), 5.0, 10'000'000, 9), 0.1499679));
}

TEST_CASE("simulate_policy examples", "[mc]") {
    const NoisyModel unit(0, 1, 0);
    for (double mu : {0.0, 4.0}) CHECK(within(simulate_policy(NoisyModel(mu, 1, 1), CostModel(0.3), PlannedN{1}, 100'000, 10), mu));
    const double target = 1.5 * 0.5641895835477562869 - 0.3;
    CHECK(within(simulate_policy(unit, CostModel(0.1), PlannedN{3}, 1'000'000, 11), target));
    CHECK(target == Catch::Approx(0.5463).margin(1e-4));

    SECTION("lookahead that stops at once keeps the first item") {
        // V+ never exceeds c = 10 for any first draw here
        const NoisyModel m(2.5, 1, 0.5);
        const auto e = simulate_policy(m, CostModel(10.0), OneMoreLookahead{50}, 100'000, 12);
        CHECK(within(e, 2.5));
        const auto planned = simulate_policy(m, CostModel(10.0), PlannedN{1}, 100'000, 12);
        CHECK(e.mean == planned.mean);
    }
    SECTION("lookahead against the planned optimum") {
        // recorded, not asserted: which policy wins is an open question
        const NoisyModel m(0, 1, 0.5);
        const CostModel cost(0.05);
        const int n_star = optimal_sample_size(m, cost).n_star;
        const auto planned = simulate_policy(m, cost, PlannedN{n_star}, 200'000, 13);
        const auto lookahead = simulate_policy(m, cost, OneMoreLookahead{200}, 200'000, 13);
        CHECK(std::isfinite(planned.mean));
        CHECK(std::isfinite(lookahead.mean));
        CHECK(within(planned, gain(m, cost, n_star)));
    }
}

TEST_CASE("coverage of the 2 SE interval", "[mc][property]") {
    const NoisyModel m(0, 1, 1);
    const double target = expected_selected_return(m, 5);
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        if (within(simulate_selection(m, 5, 20'000, seed), target, 2.0)) ++covered;
    INFO("covered=" << covered);
    CHECK(covered >= 90);
}

TEST_CASE("flags and guards", "[mc]") {
    CHECK(simulate_expected_max(DistributionSpec::pareto(3), 3, 1000, 1).flags.empty());
    const auto heavy = simulate_expected_max(DistributionSpec::pareto(2), 3, 1000, 1);
    CHECK(has_flag(heavy, "heavy_tail"));
    CHECK_FALSE(has_flag(heavy, "divergent"));
    const auto wild = simulate_expected_max(DistributionSpec::pareto(0.8), 3, 1000, 1);
    CHECK(has_flag(wild, "heavy_tail"));
    CHECK(has_flag(wild, "divergent"));
    CHECK(simulate_selection(NoisyModel(0, 1, 1), 20, 100'000, 3).ties == 0);

    CHECK_THROWS_AS(simulate_expected_max(DistributionSpec::standard_normal(), 2, 999, 1), DomainError);
    CHECK_THROWS_AS(simulate_selection(NoisyModel(0, 1, 1), 2, 10, 1), DomainError);
    CHECK_THROWS_AS(simulate_selection(NoisyModel(0, 1, 1), 0, 1000, 1), DomainError);
    CHECK_THROWS_AS(simulate_policy(NoisyModel(0, 1, 1), CostModel(0.1), PlannedN{0}, 1000, 1), DomainError);
}
