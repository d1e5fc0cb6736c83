#include "optistop/sequential_advisor.hpp"

#include <algorithm>
#include <cmath>

#include "optistop/distributions.hpp"
#include "optistop/errors.hpp"

namespace optistop {

double v_plus(double z) noexcept {
    // E[(Z - z)^+] for standard normal Z. For z < 0 use v+(z) = v+(-z) - z,
    // which avoids subtracting two nearly equal terms.
    if (z < 0.0) return v_plus(-z) - z;
    return std::max(0.0, normal_pdf(z) - z * normal_sf(z));
}

double one_more_value(const NoisyModel& model, double w0) noexcept {
    const double z0 = w0 / model.measured_spread();
    return model.worth_spread() * model.eta() * v_plus(z0);
}

SessionState::SessionState(NoisyModel model, CostModel cost, std::int64_t created_ms)
    : model_(model), cost_(cost), created_ms_(created_ms), updated_ms_(created_ms) {}

SessionState record_observation(const SessionState& session, double measured_worth, std::int64_t at_ms) {
    if (!std::isfinite(measured_worth))
        throw ValidationError("measured_worth", "measured worth must be a finite number");
    SessionState next = session;
    const double w = measured_worth - session.model().worth_mean();
    next.observations_.push_back(w);
    next.best_ = next.best_ ? std::max(*next.best_, w) : w;
    next.updated_ms_ = at_ms;
    return next;
}

std::string to_string(Recommendation r) { return r == Recommendation::SampleMore ? "sample_more" : "stop"; }

Advice advise_at(const NoisyModel& model, const CostModel& cost, double w0) {
    Advice advice;
    advice.z0 = w0 / model.measured_spread();
    advice.v_plus = v_plus(*advice.z0);
    advice.value_of_one_more = model.worth_spread() * model.eta() * *advice.v_plus;
    advice.posterior_best_worth = posterior_worth(model, w0);
    advice.per_item_cost = cost.per_item_cost();
    advice.recommendation =
        *advice.value_of_one_more > cost.per_item_cost() ? Recommendation::SampleMore : Recommendation::Stop;
    return advice;
}

Advice advise(const SessionState& session) {
    if (!session.best_measured()) {
        Advice advice;
        advice.per_item_cost = session.cost().per_item_cost();
        advice.recommendation = Recommendation::SampleMore;
        return advice;
    }
    return advise_at(session.model(), session.cost(), *session.best_measured());
}

}  // namespace optistop
