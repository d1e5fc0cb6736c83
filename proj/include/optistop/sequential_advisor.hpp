// sequential_advisor.hpp
//
// "Should we try one more?" Given the best measured value so far, w0, one
// more measurement W improves the expected return by
//     h(W) = eta^2 (W - w0) if W > w0, else 0,
// whose expectation is V+ = a eta v+(z0) with z0 = w0 / sqrt(a^2 + b^2) and
//     v+(z) = phi(z) + z (Phi(z) - 1).
// Sample again while V+ > c; at V+ == c, stop.
#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optistop/noisy_selection.hpp"
#include "optistop/planner.hpp"

namespace optistop {

// Standardized expected improvement; strictly decreasing, v+(0) = 1/sqrt(2 pi).
double v_plus(double z) noexcept;

// V+ in worth units for a best-so-far measured return w0.
double one_more_value(const NoisyModel& model, double w0) noexcept;

class SessionState {
public:
    SessionState(NoisyModel model, CostModel cost, std::int64_t created_ms = 0);

    const NoisyModel& model() const noexcept { return model_; }
    const CostModel& cost() const noexcept { return cost_; }
    // Return coordinates: raw measurement minus mu.
    const std::vector<double>& observations() const noexcept { return observations_; }
    std::optional<double> best_measured() const noexcept { return best_; }
    std::int64_t created_ms() const noexcept { return created_ms_; }
    std::int64_t updated_ms() const noexcept { return updated_ms_; }

    bool operator==(const SessionState&) const = default;

private:
    friend SessionState record_observation(const SessionState&, double, std::int64_t);

    NoisyModel model_;
    CostModel cost_;
    std::vector<double> observations_;
    std::optional<double> best_;
    std::int64_t created_ms_;
    std::int64_t updated_ms_;
};

// Copy-on-update append of a raw worth-scale measurement (mu is subtracted).
// Rejects non-finite input with ValidationError("measured_worth").
SessionState record_observation(const SessionState& session, double measured_worth, std::int64_t at_ms = 0);

enum class Recommendation { SampleMore, Stop };
// "sample_more" / "stop".
std::string to_string(Recommendation r);

struct Advice {
    // Absent before the first observation.
    std::optional<double> z0;
    std::optional<double> v_plus;
    std::optional<double> value_of_one_more;
    std::optional<double> posterior_best_worth;
    double per_item_cost = 0.0;
    Recommendation recommendation = Recommendation::SampleMore;
};

// Verdict for a best-so-far measured return w0 (return coordinates).
Advice advise_at(const NoisyModel& model, const CostModel& cost, double w0);
// Empty sessions always get SampleMore: there is nothing to keep yet.
Advice advise(const SessionState& session);

}  // namespace optistop
