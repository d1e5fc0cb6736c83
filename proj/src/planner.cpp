#include "optistop/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "optistop/errors.hpp"
#include "optistop/order_stats.hpp"

namespace optistop {

CostModel::CostModel(double per_item_cost) : c_(per_item_cost) {
    if (!(c_ >= 0.0) || !std::isfinite(c_)) throw ValidationError("c", "per-item cost must be non-negative");
}

double cumulative_cost(const CostModel& cost, int n) {
    if (n < 1) throw DomainError("cumulative_cost: n must be >= 1");
    return n == 1 ? 0.0 : n * cost.per_item_cost();
}

double gain(const NoisyModel& model, const CostModel& cost, int n) {
    return expected_selected_worth(model, n) - cumulative_cost(cost, n);
}

double ideal_gain(const DistributionSpec& spec, const CostModel& cost, int n) {
    return expected_max(spec, n) - cumulative_cost(cost, n);
}

std::string to_string(Rationale r) {
    switch (r) {
        case Rationale::MarginalCriterion: return "MarginalCriterion";
        case Rationale::PickOneNoMeasure: return "PickOneNoMeasure";
        case Rationale::Divergent: return "Divergent";
    }
    return "unknown";
}

std::string to_string(ThreeOrNoneVerdict v) {
    return v == ThreeOrNoneVerdict::TryAtLeastThree ? "TryAtLeastThree" : "PickOneAtRandom";
}

namespace {

constexpr double kTieTolerance = 1e-12;

void check_n_max(int n_max) {
    if (n_max < 2) throw DomainError("optimal_sample_size: n_max must be >= 2");
}

// `worth[i]` is the expected selected worth for n = i + 1.
PlanResult plan_from_worth(const std::vector<double>& worth, const CostModel& cost, bool fat_tail) {
    const int n_max = static_cast<int>(worth.size());
    const double c = cost.per_item_cost();

    PlanResult plan;
    plan.gain_curve.reserve(worth.size());
    plan.marginals.reserve(worth.size() - 1);
    for (int n = 1; n <= n_max; ++n) {
        plan.gain_curve.emplace_back(n, worth[static_cast<std::size_t>(n - 1)] - cumulative_cost(cost, n));
        if (n >= 2)
            plan.marginals.emplace_back(n, worth[static_cast<std::size_t>(n - 1)] - worth[static_cast<std::size_t>(n - 2)]);
    }
    auto g = [&](int n) { return plan.gain_curve[static_cast<std::size_t>(n - 1)].second; };

    // Marginal criterion: k_{n*} > c >= k_{n*+1}, n* >= 2. A marginal within
    // rounding of c is a tie and goes to the smaller n.
    int criterion = 1;
    for (const auto& [n, k] : plan.marginals) {
        const double tie = kTieTolerance * std::max(1.0, std::fabs(worth[static_cast<std::size_t>(n - 1)]));
        if (k > c + tie) criterion = n;
    }
    if (criterion >= 2 && g(criterion) > g(1)) {
        plan.n_star = criterion;
        plan.rationale = Rationale::MarginalCriterion;
    } else {
        plan.n_star = 1;
        plan.rationale = Rationale::PickOneNoMeasure;
    }

    int argmax = 1;
    for (int n = 2; n <= n_max; ++n)
        if (g(n) > g(argmax)) argmax = n;
    if (argmax != plan.n_star) {
        const double scale = std::max(1.0, std::fabs(g(argmax)));
        if (g(argmax) - g(plan.n_star) > 4 * kTieTolerance * scale)
            throw std::logic_error("optimal_sample_size: marginal criterion disagrees with gain argmax (n=" +
                                   std::to_string(plan.n_star) + " vs " + std::to_string(argmax) + ")");
    }
    plan.expected_gain = g(plan.n_star);

    if (fat_tail && plan.marginals.back().second > c) {
        plan.diverges = true;
        plan.rationale = Rationale::Divergent;
    }
    return plan;
}

}  // namespace

PlanResult optimal_sample_size(const NoisyModel& model, const CostModel& cost, int n_max) {
    check_n_max(n_max);
    const auto kappa = rankits(n_max);
    const double scale = model.eta() * model.worth_spread();
    std::vector<double> worth(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i)
        worth[i] = model.worth_mean() + (i == 0 ? 0.0 : scale * kappa[i]);
    return plan_from_worth(worth, cost, false);
}

PlanResult optimal_sample_size(const DistributionSpec& spec, const CostModel& cost, int n_max) {
    check_n_max(n_max);
    if (!has_finite_mean(spec)) {
        PlanResult plan;
        plan.n_star = n_max;
        plan.expected_gain = std::numeric_limits<double>::infinity();
        plan.diverges = true;
        plan.rationale = Rationale::Divergent;
        return plan;
    }
    std::vector<double> worth;
    if (spec.get_if<StandardNormal>() != nullptr || spec.get_if<Normal>() != nullptr) {
        const auto* normal = spec.get_if<Normal>();
        const double mu = normal ? normal->mean : 0.0;
        const double spread = normal ? normal->spread : 1.0;
        worth = rankits(n_max);
        worth[0] = mu;
        for (std::size_t i = 1; i < worth.size(); ++i) worth[i] = mu + spread * worth[i];
    } else {
        worth = RankitTable::build(spec, n_max).values();
    }
    return plan_from_worth(worth, cost, spec.get_if<Pareto>() != nullptr);
}

HeuristicResult heuristic_sample_size(HeuristicFamily family, double a, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("heuristic_sample_size: c must be positive");
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("heuristic_sample_size: a must be positive");
    const double ratio = a / c;
    const double raw = family == HeuristicFamily::UniformWidth ? std::sqrt(ratio) : ratio;
    HeuristicResult out;
    out.n = static_cast<int>(std::max(1.0, std::round(std::min(raw, 2.0e9))));
    out.outside_validity = a < 100.0 * c;
    return out;
}

ThreeOrNone rule_of_three(const NoisyModel& model, const CostModel& cost) {
    ThreeOrNone out;
    out.two_versus_one = model.worth_spread() * model.eta() * rankit(2) - 2.0 * cost.per_item_cost();
    out.three_versus_two = 0.5 * out.two_versus_one;
    out.verdict = out.two_versus_one > 0.0 ? ThreeOrNoneVerdict::TryAtLeastThree : ThreeOrNoneVerdict::PickOneAtRandom;
    return out;
}

}  // namespace optistop
