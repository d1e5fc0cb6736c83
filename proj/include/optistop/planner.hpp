// planner.hpp
//
// Sampling plans under a constant per-item cost c. Sampling one item needs no
// measurement, so C_1 = 0 and C_n = n c for n >= 2. The gain of sampling n
// and keeping the best is g(n) = E[selected worth] - C_n.
#pragma once
#include <string>
#include <utility>
#include <vector>

#include "optistop/distributions.hpp"
#include "optistop/noisy_selection.hpp"

namespace optistop {

class CostModel {
public:
    explicit CostModel(double per_item_cost);
    double per_item_cost() const noexcept { return c_; }
    bool operator==(const CostModel&) const = default;

private:
    double c_;
};

double cumulative_cost(const CostModel& cost, int n);

// mu + eta a kappa_n - C_n.
double gain(const NoisyModel& model, const CostModel& cost, int n);
// K_n - C_n for a worth distribution measured without error.
double ideal_gain(const DistributionSpec& spec, const CostModel& cost, int n);

enum class Rationale { MarginalCriterion, PickOneNoMeasure, Divergent };
std::string to_string(Rationale r);

struct PlanResult {
    int n_star = 1;
    // +infinity when the gain is unbounded (pareto alpha <= 1).
    double expected_gain = 0.0;
    std::vector<std::pair<int, double>> gain_curve;  // (n, g(n)), n = 1..n_max
    std::vector<std::pair<int, double>> marginals;   // (n, k_n), n = 2..n_max
    bool diverges = false;
    Rationale rationale = Rationale::PickOneNoMeasure;
};

inline constexpr int kDefaultMaxSampleSize = 10000;

// n* = the largest n >= 2 with k_n > c, provided g(n*) > g(1); otherwise 1.
// The answer is cross-checked against a brute-force argmax of the gain curve
// (ties to the smaller n) and std::logic_error is thrown on disagreement.
PlanResult optimal_sample_size(const NoisyModel& model, const CostModel& cost,
                               int n_max = kDefaultMaxSampleSize);
// Ideal-measurement plan for a worth distribution. Pareto with alpha <= 1
// returns diverges = true without evaluating any curve; a fat tail whose
// marginals are still above c at n_max is flagged the same way.
PlanResult optimal_sample_size(const DistributionSpec& spec, const CostModel& cost,
                               int n_max = kDefaultMaxSampleSize);

enum class HeuristicFamily { UniformWidth, NormalSpread };

struct HeuristicResult {
    int n = 1;
    // Set when a >= 100 c does not hold; the asymptotic rule is then unreliable.
    bool outside_validity = false;
};

// sqrt(a/c) for Uniform(0, a), a/c for Normal(0, a); rounded, at least 1.
HeuristicResult heuristic_sample_size(HeuristicFamily family, double a, double c);

enum class ThreeOrNoneVerdict { PickOneAtRandom, TryAtLeastThree };
std::string to_string(ThreeOrNoneVerdict v);

struct ThreeOrNone {
    ThreeOrNoneVerdict verdict = ThreeOrNoneVerdict::PickOneAtRandom;
    double two_versus_one = 0.0;    // g_2 - g_1 = a eta kappa_2 - 2c
    double three_versus_two = 0.0;  // g_3 - g_2 = (a eta kappa_2 - 2c) / 2
};

// If sampling two beats picking one blind, sampling three beats two.
ThreeOrNone rule_of_three(const NoisyModel& model, const CostModel& cost);

}  // namespace optistop
