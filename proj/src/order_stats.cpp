#include "optistop/order_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "optistop/errors.hpp"

namespace optistop {

namespace {

// ---------------------------------------------------------------------------
// Tanh-sinh nodes on [0, 1]
// ---------------------------------------------------------------------------

struct Node {
    double log_t;   // log of the abscissa, exact near both ends
    double weight;  // dt/dk, to be scaled by the step h
};

constexpr int kMaxLevel = 13;
// Abscissae closer than this to either end are dropped; the truncated mass is
// below 1e-290 for every integrand used here.
constexpr double kEndpointCut = 1e-300;

class TanhSinhRule {
public:
    static const TanhSinhRule& instance() {
        static const TanhSinhRule rule;
        return rule;
    }

    // Nodes new at `level`: every integer k for level 0, odd k afterwards.
    const std::vector<Node>& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }

private:
    TanhSinhRule() {
        levels_.resize(kMaxLevel + 1);
        for (int l = 0; l <= kMaxLevel; ++l) {
            const double h = std::ldexp(1.0, -l);
            const int stride = l == 0 ? 1 : 2;
            const int start = l == 0 ? 0 : 1;
            auto& out = levels_[static_cast<std::size_t>(l)];
            for (int k = start;; k += stride) {
                const double x = k * h;
                const double s = 0.5 * std::numbers::pi * std::sinh(x);
                const double e2 = std::exp(-2.0 * s);  // distance scale to the ends
                const double tail = e2 / (1.0 + e2);
                if (tail < kEndpointCut) break;
                const double w = 0.25 * std::numbers::pi * std::cosh(x) * 4.0 * e2 / ((1.0 + e2) * (1.0 + e2));
                // t = 1/(1+e2) at +x and t = e2/(1+e2) at -x
                const double log_hi = -std::log1p(e2);
                const double log_lo = std::log(e2) - std::log1p(e2);
                out.push_back({log_hi, w});
                if (k != 0) out.push_back({log_lo, w});
            }
        }
    }

    std::vector<std::vector<Node>> levels_;
};

double effective_tolerance(double tol, double value) {
    const double mag = std::fabs(value);
    return mag <= 10.0 ? tol : tol * mag;
}

// P^{-1}(t^{1/n}) evaluated from log t so that neither u nor 1 - u loses
// precision near the ends.
double quantile_at(const DistributionSpec& spec, double log_t, int n) {
    const double log_u = log_t / n;
    if (log_u < -std::numbers::ln2) return quantile(spec, std::exp(log_u));
    return quantile_upper(spec, -std::expm1(log_u));
}

double integrate_expected_max(const DistributionSpec& spec, int n, const QuadratureOptions& opts) {
    const auto& rule = TanhSinhRule::instance();
    const int max_level = std::clamp(opts.max_level, 1, kMaxLevel);
    double sum = 0.0;
    double previous = 0.0;
    double estimate = 0.0;
    for (int l = 0; l <= max_level; ++l) {
        for (const Node& node : rule.level(l)) sum += node.weight * quantile_at(spec, node.log_t, n);
        estimate = std::ldexp(sum, -l);
        if (l >= std::max(opts.min_level, 1) &&
            std::fabs(estimate - previous) <= effective_tolerance(opts.tolerance, estimate))
            break;
        previous = estimate;
    }
    return estimate;
}

void check_n(int n, int minimum, const char* what) {
    if (n < minimum) throw DomainError(std::string(what) + ": n must be >= " + std::to_string(minimum));
}

void check_finite_mean(const DistributionSpec& spec) {
    if (!has_finite_mean(spec)) throw DivergenceError("mean of maximum is infinite (pareto alpha <= 1)");
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

double expected_max(const DistributionSpec& spec, int n, const QuadratureOptions& opts) {
    check_n(n, 1, "expected_max");
    check_finite_mean(spec);
    if (n == 1) return mean(spec);
    return integrate_expected_max(spec, n, opts);
}

double marginal_worth(const DistributionSpec& spec, int n, const QuadratureOptions& opts) {
    check_n(n, 2, "marginal_worth");
    return expected_max(spec, n, opts) - expected_max(spec, n - 1, opts);
}

double order_statistic_cdf(const DistributionSpec& spec, int n, int k, double x) {
    check_n(n, 1, "order_statistic_cdf");
    if (k < 1 || k > n) throw DomainError("order_statistic_cdf: k must lie in [1, n]");
    const double p = cdf(spec, x);
    const double q = sf(spec, x);
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return 1.0;
    if (k == n) return std::pow(p, n);
    const double log_p = std::log(p);
    const double log_q = std::log(q);
    const double log_n_fact = std::lgamma(n + 1.0);
    double total = 0.0;
    for (int j = k; j <= n; ++j) {
        const double log_term =
            log_n_fact - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + j * log_p + (n - j) * log_q;
        total += std::exp(log_term);
    }
    return std::min(total, 1.0);
}

double max_density(const DistributionSpec& spec, int n, double x) {
    check_n(n, 1, "max_density");
    const double dens = pdf(spec, x);
    if (dens == 0.0) return 0.0;
    if (n == 1) return dens;
    return n * std::pow(cdf(spec, x), n - 1) * dens;
}

double vdw_approx_max(const DistributionSpec& spec, int n) {
    check_n(n, 1, "vdw_approx_max");
    // P(x) = n/(n+1)  <=>  P(X > x) = 1/(n+1)
    return quantile_upper(spec, 1.0 / (n + 1.0));
}

double affine_expected_max(const DistributionSpec& base, double scale, double shift, int n,
                           const QuadratureOptions& opts) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("scale", "scale must be positive");
    if (!std::isfinite(shift)) throw ValidationError("shift", "shift must be finite");
    return scale * expected_max(base, n, opts) + shift;
}

double odd_order_from_even(std::span<const double> even_orders) {
    // With D = P - 1/2 (odd) and M_j = int x D^j p dx (nonzero only for odd j):
    //   K_{2r}   = 2r     sum_{j odd} C(2r-1, j) 2^{-(2r-1-j)} M_j
    //   K_{2m+1} = (2m+1) sum_{j odd} C(2m,   j) 2^{-(2m-j)}   M_j
    const int m = static_cast<int>(even_orders.size());
    if (m == 0) throw DomainError("odd_order_from_even: need at least K_2");
    std::vector<double> moments(static_cast<std::size_t>(m));  // M_1, M_3, ..., M_{2m-1}
    for (int r = 1; r <= m; ++r) {
        double known = 0.0;
        for (int i = 0; i + 1 < r; ++i) {
            const int j = 2 * i + 1;
            known += binomial(2 * r - 1, j) * std::ldexp(1.0, -(2 * r - 1 - j)) * moments[static_cast<std::size_t>(i)];
        }
        moments[static_cast<std::size_t>(r - 1)] = even_orders[static_cast<std::size_t>(r - 1)] / (2.0 * r) - known;
    }
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const int j = 2 * i + 1;
        total += binomial(2 * m, j) * std::ldexp(1.0, -(2 * m - j)) * moments[static_cast<std::size_t>(i)];
    }
    return (2.0 * m + 1.0) * total;
}

// ---------------------------------------------------------------------------
// Rankit memo
// ---------------------------------------------------------------------------

namespace {

std::mutex& rankit_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double>& rankit_cache() {
    static std::vector<double> cache;
    return cache;
}

void extend_rankits(int max_n) {
    auto& cache = rankit_cache();
    const int have = static_cast<int>(cache.size());
    if (max_n <= have) return;
    const auto spec = DistributionSpec::standard_normal();
    cache.reserve(static_cast<std::size_t>(max_n));
    for (int n = have + 1; n <= max_n; ++n) cache.push_back(expected_max(spec, n));
}

}  // namespace

double rankit(int n) {
    check_n(n, 1, "rankit");
    std::lock_guard lock(rankit_mutex());
    extend_rankits(n);
    return rankit_cache()[static_cast<std::size_t>(n - 1)];
}

std::vector<double> rankits(int max_n) {
    check_n(max_n, 1, "rankits");
    std::lock_guard lock(rankit_mutex());
    extend_rankits(max_n);
    const auto& cache = rankit_cache();
    return {cache.begin(), cache.begin() + max_n};
}

// ---------------------------------------------------------------------------
// RankitTable
// ---------------------------------------------------------------------------

RankitTable RankitTable::build(const DistributionSpec& spec, int max_n, const QuadratureOptions& opts,
                               unsigned workers) {
    check_n(max_n, 1, "RankitTable");
    check_finite_mean(spec);
    std::vector<double> values(static_cast<std::size_t>(max_n));
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(max_n));

    std::atomic<int> next{1};
    auto run = [&] {
        for (int n = next++; n <= max_n; n = next++) values[static_cast<std::size_t>(n - 1)] = optistop::expected_max(spec, n, opts);
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    return RankitTable(spec, std::move(values), opts.tolerance);
}

double RankitTable::expected_max(int n) const {
    if (n < 1 || n > max_n()) throw DomainError("RankitTable: n out of range");
    return values_[static_cast<std::size_t>(n - 1)];
}

double RankitTable::marginal(int n) const {
    if (n < 2 || n > max_n()) throw DomainError("RankitTable: marginal needs 2 <= n <= max_n");
    return values_[static_cast<std::size_t>(n - 1)] - values_[static_cast<std::size_t>(n - 2)];
}

void RankitTable::write_csv(std::ostream& os) const {
    char buf[96];
    os << "n,K_n,k_n\n";
    for (int n = 1; n <= max_n(); ++n) {
        if (n == 1) {
            std::snprintf(buf, sizeof buf, "%d,%.12g,\n", n, expected_max(n));
        } else {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", n, expected_max(n), marginal(n));
        }
        os << buf;
    }
}

}  // namespace optistop
