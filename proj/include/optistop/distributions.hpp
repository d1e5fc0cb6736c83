// distributions.hpp
//
// Worth distributions used throughout optistop: the standard normal, a
// general normal, a uniform interval and a Pareto power law on x > 1.
//
// Every "spread" in this library is a STANDARD DEVIATION. Normal(mean, spread)
// has density exp(-(x-mean)^2 / (2 spread^2)) / sqrt(2 pi spread^2).
#pragma once
#include <string>
#include <variant>

namespace optistop {

// ---------------------------------------------------------------------------
// Standard normal primitives. phi/Phi are accurate to ~1e-15 absolute over
// the whole real line (erfc based); the quantile is Wichura's AS241 followed
// by one Newton step against normal_cdf.
// ---------------------------------------------------------------------------

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x) noexcept;

// Phi^{-1}(u) for 0 < u < 1. Throws DomainError otherwise.
double normal_quantile(double u);
// Phi^{-1}(1 - q) computed from q directly, so q ~ 1e-300 is fine.
double normal_quantile_upper(double q);

namespace detail {
// AS241 alone, no refinement and no argument checks. Relative accuracy is
// about 1e-16; used by the Monte-Carlo sampler where throughput matters.
double normal_quantile_as241(double u) noexcept;
}  // namespace detail

// ---------------------------------------------------------------------------
// Distribution families
// ---------------------------------------------------------------------------

struct StandardNormal {
    bool operator==(const StandardNormal&) const = default;
};

struct Normal {
    double mean = 0.0;
    double spread = 1.0;  // standard deviation, > 0
    bool operator==(const Normal&) const = default;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;  // hi > lo
    bool operator==(const Uniform&) const = default;
};

// p(x) = alpha x^(-1-alpha) for x > 1.
struct Pareto {
    double alpha = 2.0;  // > 0
    bool operator==(const Pareto&) const = default;
};

class DistributionSpec {
public:
    using Variant = std::variant<StandardNormal, Normal, Uniform, Pareto>;

    DistributionSpec() = default;
    // Validating constructors; throw ValidationError naming the bad field.
    DistributionSpec(StandardNormal v);
    DistributionSpec(Normal v);
    DistributionSpec(Uniform v);
    DistributionSpec(Pareto v);

    static DistributionSpec standard_normal() { return {StandardNormal{}}; }
    static DistributionSpec normal(double mean, double spread) { return {Normal{mean, spread}}; }
    static DistributionSpec uniform(double lo, double hi) { return {Uniform{lo, hi}}; }
    static DistributionSpec pareto(double alpha) { return {Pareto{alpha}}; }

    const Variant& variant() const noexcept { return v_; }
    template <class T>
    const T* get_if() const noexcept { return std::get_if<T>(&v_); }

    // "std_normal", "normal", "uniform" or "pareto".
    std::string family() const;

    bool operator==(const DistributionSpec&) const = default;

private:
    Variant v_{StandardNormal{}};
};

double pdf(const DistributionSpec& spec, double x) noexcept;
double cdf(const DistributionSpec& spec, double x) noexcept;
// P(X > x).
double sf(const DistributionSpec& spec, double x) noexcept;

// Inverse CDF on the open interval (0, 1); DomainError outside it.
double quantile(const DistributionSpec& spec, double u);
// Inverse survival function: the x with P(X > x) = q, 0 < q < 1. Keeps full
// relative precision in the upper tail where 1 - q rounds to 1.
double quantile_upper(const DistributionSpec& spec, double q);

// Support endpoints (may be infinite).
double support_lower(const DistributionSpec& spec) noexcept;
double support_upper(const DistributionSpec& spec) noexcept;

// Infinite for Pareto with alpha <= 1.
double mean(const DistributionSpec& spec) noexcept;
bool has_finite_mean(const DistributionSpec& spec) noexcept;
// Finite variance (Pareto needs alpha > 2).
bool has_finite_variance(const DistributionSpec& spec) noexcept;
// True when the density is even about its centre (normal, uniform).
bool is_symmetric(const DistributionSpec& spec) noexcept;

}  // namespace optistop
