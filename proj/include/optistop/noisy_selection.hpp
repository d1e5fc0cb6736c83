// noisy_selection.hpp
//
// Selection under normal measurement error. Worth A ~ Normal(mu, a); each
// measurement adds independent error Y ~ Normal(0, b). Everything here works
// in return coordinates X = A - mu, so a measured value is W = X + Y.
// a and b are standard deviations.
#pragma once

namespace optistop {

class NoisyModel {
public:
    // Throws ValidationError: a must be > 0, b >= 0, all finite.
    NoisyModel(double worth_mean, double worth_spread, double error_spread);

    double worth_mean() const noexcept { return mu_; }
    double worth_spread() const noexcept { return a_; }
    double error_spread() const noexcept { return b_; }

    // eta = a / sqrt(a^2 + b^2), in (0, 1].
    double eta() const noexcept;
    // eta^2 = a^2 / (a^2 + b^2), the shrinkage applied to a measurement.
    double eta_squared() const noexcept;
    // sqrt(a^2 + b^2): spread of W.
    double measured_spread() const noexcept;
    // a b / sqrt(a^2 + b^2): spread of X given W.
    double posterior_spread() const noexcept;

    bool operator==(const NoisyModel&) const = default;

private:
    double mu_;
    double a_;
    double b_;
};

double degradation_factor(const NoisyModel& model) noexcept;

// E[X | W = w] = eta^2 w.
double posterior_mean_return(const NoisyModel& model, double w) noexcept;
// mu + eta^2 w.
double posterior_worth(const NoisyModel& model, double w) noexcept;

// Density of W: normal with spread sqrt(a^2 + b^2).
double measured_density(const NoisyModel& model, double w) noexcept;

// phi_a(x) phi_b(w - x). Requires b > 0 (DegenerateModelError).
double joint_density(const NoisyModel& model, double x, double w);

// f_X(x | W = w): normal in x with mean eta^2 w and the posterior spread.
// DegenerateModelError when b = 0 (the conditional is a point mass).
double conditional_return_density(const NoisyModel& model, double x, double w);

// Expected return of the item that measures largest among n: eta a kappa_n.
double expected_selected_return(const NoisyModel& model, int n);
// mu + eta a kappa_n.
double expected_selected_worth(const NoisyModel& model, int n);

}  // namespace optistop
