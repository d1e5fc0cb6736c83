#include "optistop/noisy_selection.hpp"

#include <cmath>

#include "optistop/distributions.hpp"
#include "optistop/errors.hpp"
#include "optistop/order_stats.hpp"

namespace optistop {

NoisyModel::NoisyModel(double worth_mean, double worth_spread, double error_spread)
    : mu_(worth_mean), a_(worth_spread), b_(error_spread) {
    if (!std::isfinite(mu_)) throw ValidationError("mu", "worth mean must be finite");
    if (!(a_ > 0.0) || !std::isfinite(a_)) throw ValidationError("a", "worth spread a must be positive");
    if (!(b_ >= 0.0) || !std::isfinite(b_)) throw ValidationError("b", "error spread b must be non-negative");
}

double NoisyModel::eta() const noexcept { return a_ / measured_spread(); }

double NoisyModel::eta_squared() const noexcept {
    if (b_ == 0.0) return 1.0;
    const double r = b_ / a_;
    return 1.0 / (1.0 + r * r);
}

double NoisyModel::measured_spread() const noexcept { return std::hypot(a_, b_); }

double NoisyModel::posterior_spread() const noexcept { return a_ * b_ / measured_spread(); }

double degradation_factor(const NoisyModel& model) noexcept { return model.eta(); }

double posterior_mean_return(const NoisyModel& model, double w) noexcept { return model.eta_squared() * w; }

double posterior_worth(const NoisyModel& model, double w) noexcept {
    return model.worth_mean() + posterior_mean_return(model, w);
}

double measured_density(const NoisyModel& model, double w) noexcept {
    const double s = model.measured_spread();
    return normal_pdf(w / s) / s;
}

double joint_density(const NoisyModel& model, double x, double w) {
    const double a = model.worth_spread();
    const double b = model.error_spread();
    if (b == 0.0) throw DegenerateModelError("joint density of (X, W) is singular when b = 0");
    return normal_pdf(x / a) / a * normal_pdf((w - x) / b) / b;
}

double conditional_return_density(const NoisyModel& model, double x, double w) {
    if (model.error_spread() == 0.0)
        throw DegenerateModelError("conditional return density is a point mass when b = 0");
    const double s = model.posterior_spread();
    return normal_pdf((x - posterior_mean_return(model, w)) / s) / s;
}

double expected_selected_return(const NoisyModel& model, int n) {
    if (n < 1) throw DomainError("expected_selected_return: n must be >= 1");
    if (n == 1) return 0.0;
    return model.eta() * model.worth_spread() * rankit(n);
}

double expected_selected_worth(const NoisyModel& model, int n) {
    return model.worth_mean() + expected_selected_return(model, n);
}

}  // namespace optistop
