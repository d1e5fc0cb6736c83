// order_stats.hpp
//
// Expected maxima K_n = E[max of n draws] and related order-statistic
// quantities. For the standard normal K_n is the rankit kappa_n.
//
// K_n is integrated in the quantile domain,
//     K_n = n * int_0^1 P^{-1}(u) u^{n-1} du = int_0^1 P^{-1}(t^{1/n}) dt,
// with tanh-sinh quadrature. The substitution t = u^n absorbs the weight, and
// u = exp(log(t)/n) stays representable for n up to 1e6 and beyond.
#pragma once
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "optistop/distributions.hpp"

namespace optistop {

struct QuadratureOptions {
    // Absolute tolerance while |K_n| <= 10, relative above.
    double tolerance = 1e-9;
    int min_level = 3;
    int max_level = 12;
};

// K_n for n >= 1. DivergenceError for Pareto alpha <= 1, DomainError for n < 1.
double expected_max(const DistributionSpec& spec, int n, const QuadratureOptions& opts = {});

// k_n = K_n - K_{n-1}, n >= 2.
double marginal_worth(const DistributionSpec& spec, int n, const QuadratureOptions& opts = {});

// P(X_(k) <= x) = sum_{j=k}^{n} C(n,j) P(x)^j (1-P(x))^{n-j}, 1 <= k <= n.
double order_statistic_cdf(const DistributionSpec& spec, int n, int k, double x);

// Density of the maximum: n P(x)^{n-1} p(x).
double max_density(const DistributionSpec& spec, int n, double x);

// Van der Waerden: the x solving P(x) = n/(n+1).
double vdw_approx_max(const DistributionSpec& spec, int n);

// Expected maximum of scale * X + shift where X ~ base, scale > 0.
double affine_expected_max(const DistributionSpec& base, double scale, double shift, int n,
                           const QuadratureOptions& opts = {});

// For an even density, K_{2m+1} follows from K_2, K_4, ..., K_{2m}
// (K_3 = 3/2 K_2, K_5 = 5/2 K_4 - 5/2 K_2, ...). `even_orders` holds
// K_2, K_4, ..., K_{2m} measured from the centre of symmetry; returns the
// centred K_{2m+1}.
double odd_order_from_even(std::span<const double> even_orders);

// kappa_n for the standard normal, memoised process-wide. Thread-safe.
double rankit(int n);
// kappa_1..kappa_{max_n} (index 0 holds kappa_1).
std::vector<double> rankits(int max_n);

class RankitTable {
public:
    // Computes K_1..K_max_n in one sweep. Work is split over threads; each
    // entry is computed independently so the result never depends on the
    // schedule. Throws DivergenceError for infinite-mean specs.
    static RankitTable build(const DistributionSpec& spec, int max_n, const QuadratureOptions& opts = {},
                             unsigned workers = 0);

    const DistributionSpec& spec() const noexcept { return spec_; }
    int max_n() const noexcept { return static_cast<int>(values_.size()); }
    double tolerance() const noexcept { return tolerance_; }

    // K_n, 1 <= n <= max_n.
    double expected_max(int n) const;
    // k_n, 2 <= n <= max_n.
    double marginal(int n) const;
    const std::vector<double>& values() const noexcept { return values_; }

    // CSV with header `n,K_n,k_n`, LF line endings, k_1 left empty.
    void write_csv(std::ostream& os) const;

private:
    RankitTable(DistributionSpec spec, std::vector<double> values, double tol)
        : spec_(std::move(spec)), values_(std::move(values)), tolerance_(tol) {}

    DistributionSpec spec_;
    std::vector<double> values_;
    double tolerance_;
};

}  // namespace optistop
