// mc_oracle.hpp
//
// Monte-Carlo estimates of the analytic quantities, used as an independent
// check. Every trial draws from its own Philox4x32-10 stream keyed by
// (seed, trial index), and trials are reduced in fixed-size blocks combined
// in block order, so the result is bit-identical for any worker count.
#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "optistop/distributions.hpp"
#include "optistop/noisy_selection.hpp"
#include "optistop/planner.hpp"

namespace optistop {

// Philox4x32-10 (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// Uniform draws for one trial. Values lie strictly inside (0, 1).
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t trial) noexcept;
    double uniform() noexcept;
    // Standard normal by inversion.
    double normal() noexcept;

private:
    PhiloxKey key_;
    std::uint64_t trial_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    // "heavy_tail" (std_error unreliable), "divergent", "ties".
    std::vector<std::string> flags;
    // Exact ties between measured values; resolved to the lowest index.
    std::int64_t ties = 0;
};

inline constexpr std::int64_t kMinTrials = 1000;

struct PlannedN {
    int n = 1;
};
struct OneMoreLookahead {
    int max_n = 100;
};
using Policy = std::variant<PlannedN, OneMoreLookahead>;

// workers == 0 picks the hardware concurrency.
McEstimate simulate_expected_max(const DistributionSpec& spec, int n, std::int64_t trials, std::uint64_t seed,
                                 unsigned workers = 0);

// Draws X_i ~ N(0, a), Y_i ~ N(0, b), keeps the item with the largest
// W_i = X_i + Y_i and records its true return X.
McEstimate simulate_selection(const NoisyModel& model, int n, std::int64_t trials, std::uint64_t seed,
                              unsigned workers = 0);

// Averages h(W) = eta^2 (W - w0)^+ over fresh measurements W.
McEstimate simulate_one_more(const NoisyModel& model, double w0, std::int64_t trials, std::uint64_t seed,
                             unsigned workers = 0);

// Net gain per search: true worth of the kept item minus C_k for the k items
// sampled. OneMoreLookahead samples while advise_at() says SampleMore.
McEstimate simulate_policy(const NoisyModel& model, const CostModel& cost, const Policy& policy,
                           std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

}  // namespace optistop
