// test_planner.cpp
//
// The marginal criterion is checked against a brute-force argmax written here,
// over random configurations drawn from a fixed-seed generator.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "optistop/errors.hpp"
#include "optistop/order_stats.hpp"
#include "optistop/planner.hpp"
#include "oracles/golden_values.hpp"
#include "oracles/quadrature.hpp"

using namespace optistop;
using Catch::Approx;

namespace {

constexpr double kKappa2 = 0.5641895835477562869;

bool unimodal(const std::vector<std::pair<int, double>>& curve) {
    // rises (weakly) and then falls (weakly), judged from n = 2 on
    std::size_t i = 1;
    while (i + 1 < curve.size() && curve[i + 1].second >= curve[i].second) ++i;
    while (i + 1 < curve.size() && curve[i + 1].second <= curve[i].second) ++i;
    return i + 1 == curve.size();
}

}  // namespace

TEST_CASE("cumulative_cost", "[planner]") {
    CHECK(cumulative_cost(CostModel(2.0), 1) == 0.0);
    CHECK(cumulative_cost(CostModel(2.0), 5) == 10.0);
    CHECK(cumulative_cost(CostModel(0.0), 2) == 0.0);
    CHECK_THROWS_AS(cumulative_cost(CostModel(1.0), 0), DomainError);
    CHECK_THROWS_AS(CostModel(-0.1), ValidationError);
    CHECK_THROWS_AS(CostModel(NAN), ValidationError);
}

TEST_CASE("gain", "[planner]") {
    for (double mu : {-1.0, 0.0, 7.5}) CHECK(gain(NoisyModel(mu, 2, 1), CostModel(0.3), 1) == mu);
    CHECK(gain(NoisyModel(0, 1, 0), CostModel(0.1), 2) == Approx(kKappa2 - 0.2).epsilon(1e-14));
    CHECK(gain(NoisyModel(0, 1, 0), CostModel(0.1), 2) == Approx(0.3642).margin(1e-4));
    const NoisyModel m(4, 3, 4);
    CHECK(gain(m, CostModel(0.05), 2) == Approx(3 * 0.6 * kKappa2 + 4 - 0.1).epsilon(1e-14));
}

TEST_CASE("ideal_gain", "[planner]") {
    const auto u = DistributionSpec::uniform(0, 1);
    CHECK(ideal_gain(u, CostModel(0.06), 3) == Approx(0.57).margin(1e-9));
    CHECK(ideal_gain(u, CostModel(0.06), 1) == Approx(0.5).margin(1e-12));
    CHECK(ideal_gain(u, CostModel(0.06), 4) == Approx(0.56).margin(1e-9));
    CHECK_THROWS_AS(ideal_gain(DistributionSpec::pareto(0.8), CostModel(0.1), 2), DivergenceError);
}

TEST_CASE("optimal_sample_size examples", "[planner]") {
    SECTION("uniform, c = 0.06") {
        const auto plan = optimal_sample_size(DistributionSpec::uniform(0, 1), CostModel(0.06));
        CHECK(plan.n_star == 3);
        CHECK(plan.rationale == Rationale::MarginalCriterion);
        CHECK_FALSE(plan.diverges);
        CHECK(plan.expected_gain == Approx(0.57).margin(1e-9));
        const int brute = oracle::argmax_smallest([](int n) { return n / (n + 1.0) - (n == 1 ? 0.0 : 0.06 * n); }, 50);
        CHECK(brute == 3);
    }
    SECTION("standard normal, c above kappa_2") {
        const auto plan = optimal_sample_size(DistributionSpec::standard_normal(), CostModel(0.6));
        CHECK(plan.n_star == 1);
        CHECK(plan.rationale == Rationale::PickOneNoMeasure);
        CHECK(plan.expected_gain == 0.0);
        const auto noisy = optimal_sample_size(NoisyModel(0, 1, 0), CostModel(0.6));
        CHECK(noisy.n_star == 1);
        CHECK(noisy.rationale == Rationale::PickOneNoMeasure);
    }
    SECTION("pareto with infinite mean diverges") {
        for (double alpha : {0.5, 1.0}) {
            for (double c : {0.01, 1.0, 100.0}) {
                const auto plan = optimal_sample_size(DistributionSpec::pareto(alpha), CostModel(c));
                CHECK(plan.diverges);
                CHECK(plan.rationale == Rationale::Divergent);
                CHECK(std::isinf(plan.expected_gain));
            }
        }
    }
    SECTION("fat tail still paying at n_max is flagged") {
        const auto plan = optimal_sample_size(DistributionSpec::pareto(1.5), CostModel(1e-4), 1000);
        CHECK(plan.diverges);
        CHECK(plan.rationale == Rationale::Divergent);
        const auto settled = optimal_sample_size(DistributionSpec::pareto(3.0), CostModel(0.1), 1000);
        CHECK_FALSE(settled.diverges);
        CHECK(settled.n_star >= 2);
    }
    SECTION("n_max must allow a comparison") {
        CHECK_THROWS_AS(optimal_sample_size(NoisyModel(0, 1, 1), CostModel(0.1), 1), DomainError);
    }
}

TEST_CASE("PlanResult invariants", "[planner]") {
    const auto plan = optimal_sample_size(NoisyModel(2, 3, 1), CostModel(0.05), 500);
    REQUIRE(plan.gain_curve.size() == 500);
    REQUIRE(plan.marginals.size() == 499);
    CHECK(plan.gain_curve.front() == std::pair<int, double>{1, 2.0});
    CHECK(plan.marginals.front().first == 2);
    double best = -INFINITY;
    for (const auto& [n, g] : plan.gain_curve) best = std::max(best, g);
    CHECK(plan.expected_gain == best);
    CHECK(plan.gain_curve[plan.n_star - 1].second == best);
}

TEST_CASE("marginal criterion equals brute-force argmax", "[planner][property]") {
    std::mt19937_64 rng(20240519);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n_max = 200;
    for (int trial = 0; trial < 200; ++trial) {
        const int family = trial % 3;
        const double a = 0.1 + 10.0 * unit(rng);
        const double b = family == 0 ? 3.0 * a * unit(rng) : 0.0;
        // c between k_50 and k_2 of the family at hand
        double k2, k50;
        if (family == 2) {
            k2 = a / 6.0;
            k50 = a / (50.0 * 49.0);
        } else {
            const double scale = NoisyModel(0, a, b).eta() * a;
            k2 = scale * (rankit(2) - rankit(1));
            k50 = scale * (rankit(50) - rankit(49));
        }
        const double c = k50 + (k2 - k50) * unit(rng);
        const CostModel cost(c);

        PlanResult plan;
        int brute = 0;
        if (family == 2) {
            const auto spec = DistributionSpec::uniform(0, a);
            plan = optimal_sample_size(spec, cost, n_max);
            brute = oracle::argmax_smallest(
                [&](int n) { return a * n / (n + 1.0) - (n == 1 ? 0.0 : c * n); }, n_max);
        } else {
            const NoisyModel model(family == 0 ? 5.0 : 0.0, a, b);
            plan = optimal_sample_size(model, cost, n_max);
            brute = oracle::argmax_smallest([&](int n) { return gain(model, cost, n); }, n_max);
        }
        INFO("trial=" << trial << " family=" << family << " a=" << a << " b=" << b << " c=" << c);
        CHECK(plan.n_star == brute);
        CHECK(plan.n_star <= 50);
    }
}

TEST_CASE("ties go to the smaller sample", "[planner]") {
    // uniform k_4 = 1/20: at c = 0.05 exactly, g(3) = g(4)
    const auto plan = optimal_sample_size(DistributionSpec::uniform(0, 1), CostModel(0.05));
    CHECK(plan.n_star == 3);
}

TEST_CASE("gain curve is unimodal when c < k_2", "[planner][property]") {
    for (double c : {0.001, 0.01, 0.1, 0.3}) {
        CHECK(unimodal(optimal_sample_size(NoisyModel(0, 1, 0.5), CostModel(c), 2000).gain_curve));
        CHECK(unimodal(optimal_sample_size(DistributionSpec::normal(1, 2), CostModel(c), 2000).gain_curve));
        CHECK(unimodal(optimal_sample_size(DistributionSpec::uniform(0, 3), CostModel(c), 2000).gain_curve));
    }
}

TEST_CASE("heuristic_sample_size", "[planner]") {
    CHECK(heuristic_sample_size(HeuristicFamily::UniformWidth, 100, 0.01).n == 100);
    CHECK_FALSE(heuristic_sample_size(HeuristicFamily::UniformWidth, 100, 0.01).outside_validity);
    CHECK(heuristic_sample_size(HeuristicFamily::NormalSpread, 10, 0.1).n == 100);
    const auto edge = heuristic_sample_size(HeuristicFamily::UniformWidth, 0.5, 0.5);
    CHECK(edge.n == 1);
    CHECK(edge.outside_validity);
    CHECK_THROWS_AS(heuristic_sample_size(HeuristicFamily::UniformWidth, 1, 0), DomainError);
    CHECK_THROWS_AS(heuristic_sample_size(HeuristicFamily::NormalSpread, 1, -2), DomainError);
}

TEST_CASE("uniform heuristic tracks the exact optimum", "[planner][property]") {
    for (double ratio : {1e4, 1e6}) {
        const double a = 1.0, c = a / ratio;
        const int exact = optimal_sample_size(DistributionSpec::uniform(0, a), CostModel(c)).n_star;
        const int approx = heuristic_sample_size(HeuristicFamily::UniformWidth, a, c).n;
        INFO("a/c=" << ratio << " exact=" << exact << " heuristic=" << approx);
        CHECK(std::fabs(approx - exact) / exact < 0.05);
    }
}

TEST_CASE("rule_of_three", "[planner]") {
    CHECK(rule_of_three(NoisyModel(0, 1, 0), CostModel(0.1)).verdict == ThreeOrNoneVerdict::TryAtLeastThree);
    CHECK(rule_of_three(NoisyModel(0, 1, 0), CostModel(0.5)).verdict == ThreeOrNoneVerdict::PickOneAtRandom);
    const auto noisy = rule_of_three(NoisyModel(0, 1, 100), CostModel(0.01));
    CHECK(noisy.verdict == ThreeOrNoneVerdict::PickOneAtRandom);
    CHECK(noisy.two_versus_one == Approx(kKappa2 / std::sqrt(10001.0) - 0.02).epsilon(1e-12));
    CHECK(to_string(ThreeOrNoneVerdict::TryAtLeastThree) != to_string(ThreeOrNoneVerdict::PickOneAtRandom));
}

TEST_CASE("whenever two beats one, three beats two", "[planner][property]") {
    for (double a : {0.2, 1.0, 5.0, 20.0, 80.0}) {
        for (double b : {0.0, 0.5, 2.0, 10.0, 50.0}) {
            for (double c : {0.001, 0.05, 0.3, 1.0, 4.0}) {
                const NoisyModel m(1.0, a, b);
                const CostModel cost(c);
                const double g1 = gain(m, cost, 1), g2 = gain(m, cost, 2), g3 = gain(m, cost, 3);
                const auto r = rule_of_three(m, cost);
                INFO("a=" << a << " b=" << b << " c=" << c);
                CHECK(std::fabs((g3 - g2) - (a * m.eta() * kKappa2 - 2 * c) / 2) < 1e-9);
                CHECK(r.three_versus_two == Approx((g3 - g2)).margin(1e-9));
                CHECK(r.two_versus_one == Approx((g2 - g1)).margin(1e-9));
                if (g2 > g1) CHECK(g3 >= g2);
                CHECK((r.verdict == ThreeOrNoneVerdict::TryAtLeastThree) == (a * m.eta() * kKappa2 - 2 * c > 0));
            }
        }
    }
}
