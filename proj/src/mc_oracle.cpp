#include "optistop/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "optistop/errors.hpp"
#include "optistop/sequential_advisor.hpp"

namespace optistop {

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, trial_(trial) {}

double TrialStream::uniform() noexcept {
    if (used_ >= 4) {
        buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                 static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)},
                                key_);
        ++block_;
        used_ = 0;
    }
    const std::uint64_t bits = (std::uint64_t{buffer_[static_cast<std::size_t>(used_)]} << 32) |
                               buffer_[static_cast<std::size_t>(used_ + 1)];
    used_ += 2;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double TrialStream::normal() noexcept { return detail::normal_quantile_as241(uniform()); }

namespace {

constexpr std::int64_t kBlockTrials = 8192;

struct BlockStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t ties = 0;
};

// Per-trial outcome. `ties` counts exact argmax ties inside the trial.
struct TrialOutcome {
    double value;
    int ties = 0;
};

template <class TrialFn>
McEstimate run_trials(std::int64_t trials, std::uint64_t seed, unsigned workers, TrialFn&& trial_fn) {
    if (trials < kMinTrials)
        throw DomainError("simulation needs at least " + std::to_string(kMinTrials) + " trials");
    const std::int64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<BlockStats> stats(static_cast<std::size_t>(blocks));

    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (std::int64_t blk = next++; blk < blocks; blk = next++) {
            BlockStats s;
            const std::int64_t first = blk * kBlockTrials;
            const std::int64_t last = std::min(trials, first + kBlockTrials);
            for (std::int64_t t = first; t < last; ++t) {
                TrialStream stream(seed, static_cast<std::uint64_t>(t));
                const TrialOutcome out = trial_fn(stream);
                ++s.count;
                const double delta = out.value - s.mean;
                s.mean += delta / static_cast<double>(s.count);
                s.m2 += delta * (out.value - s.mean);
                s.ties += out.ties;
            }
            stats[static_cast<std::size_t>(blk)] = s;
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    // Chan et al. pairwise combination, always in block order.
    BlockStats total;
    for (const BlockStats& s : stats) {
        if (total.count == 0) {
            total = s;
            continue;
        }
        const auto n_a = static_cast<double>(total.count);
        const auto n_b = static_cast<double>(s.count);
        const double n = n_a + n_b;
        const double delta = s.mean - total.mean;
        total.mean += delta * n_b / n;
        total.m2 += s.m2 + delta * delta * n_a * n_b / n;
        total.count += s.count;
        total.ties += s.ties;
    }

    McEstimate est;
    est.mean = total.mean;
    est.trials = trials;
    est.seed = seed;
    est.ties = total.ties;
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    est.std_error = std::sqrt(variance / static_cast<double>(total.count));
    if (est.ties > 0) est.flags.emplace_back("ties");
    return est;
}

void check_n(int n) {
    if (n < 1) throw DomainError("simulation: n must be >= 1");
}

// Sample n items, return (index of largest measured, ties, true return).
struct Pick {
    double true_return;
    double measured;
    int ties;
};

Pick pick_best(TrialStream& rng, double a, double b, int n) {
    Pick best{0.0, -std::numeric_limits<double>::infinity(), 0};
    for (int i = 0; i < n; ++i) {
        const double x = a * rng.normal();
        const double w = b > 0.0 ? x + b * rng.normal() : x;
        if (w > best.measured) {
            best.true_return = x;
            best.measured = w;
        } else if (w == best.measured) {
            ++best.ties;
        }
    }
    return best;
}

}  // namespace

McEstimate simulate_expected_max(const DistributionSpec& spec, int n, std::int64_t trials, std::uint64_t seed,
                                 unsigned workers) {
    check_n(n);
    // Max of n inverse-CDF draws is the quantile of the smallest upper-tail
    // probability among n uniforms.
    auto est = run_trials(trials, seed, workers, [&](TrialStream& rng) {
        double q = 1.0;
        for (int i = 0; i < n; ++i) q = std::min(q, rng.uniform());
        return TrialOutcome{quantile_upper(spec, q)};
    });
    if (const auto* p = spec.get_if<Pareto>()) {
        if (p->alpha <= 2.0) est.flags.emplace_back("heavy_tail");
        if (p->alpha <= 1.0) est.flags.emplace_back("divergent");
    }
    return est;
}

McEstimate simulate_selection(const NoisyModel& model, int n, std::int64_t trials, std::uint64_t seed,
                              unsigned workers) {
    check_n(n);
    const double a = model.worth_spread();
    const double b = model.error_spread();
    return run_trials(trials, seed, workers, [&](TrialStream& rng) {
        const Pick best = pick_best(rng, a, b, n);
        return TrialOutcome{best.true_return, best.ties};
    });
}

McEstimate simulate_one_more(const NoisyModel& model, double w0, std::int64_t trials, std::uint64_t seed,
                             unsigned workers) {
    const double a = model.worth_spread();
    const double b = model.error_spread();
    const double shrink = model.eta_squared();
    return run_trials(trials, seed, workers, [&](TrialStream& rng) {
        const double x = a * rng.normal();
        const double w = b > 0.0 ? x + b * rng.normal() : x;
        return TrialOutcome{w > w0 ? shrink * (w - w0) : 0.0};
    });
}

McEstimate simulate_policy(const NoisyModel& model, const CostModel& cost, const Policy& policy,
                           std::int64_t trials, std::uint64_t seed, unsigned workers) {
    const double mu = model.worth_mean();
    const double a = model.worth_spread();
    const double b = model.error_spread();
    if (const auto* planned = std::get_if<PlannedN>(&policy)) {
        const int n = planned->n;
        check_n(n);
        const double total_cost = cumulative_cost(cost, n);
        return run_trials(trials, seed, workers, [&](TrialStream& rng) {
            const Pick best = pick_best(rng, a, b, n);
            return TrialOutcome{mu + best.true_return - total_cost, best.ties};
        });
    }
    const int max_n = std::get<OneMoreLookahead>(policy).max_n;
    check_n(max_n);
    return run_trials(trials, seed, workers, [&](TrialStream& rng) {
        Pick best{0.0, -std::numeric_limits<double>::infinity(), 0};
        int sampled = 0;
        while (sampled < max_n) {
            const double x = a * rng.normal();
            const double w = b > 0.0 ? x + b * rng.normal() : x;
            ++sampled;
            if (w > best.measured) {
                best.true_return = x;
                best.measured = w;
            } else if (w == best.measured) {
                ++best.ties;
            }
            if (advise_at(model, cost, best.measured).recommendation == Recommendation::Stop) break;
        }
        return TrialOutcome{mu + best.true_return - cumulative_cost(cost, sampled), best.ties};
    });
}

}  // namespace optistop
