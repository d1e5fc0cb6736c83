#include "optistop/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "optistop/errors.hpp"

namespace optistop {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(double u, const char* what) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Standard normal
// ---------------------------------------------------------------------------

double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace detail {

// Wichura, M.J. (1988) Algorithm AS241: the percentage points of the normal
// distribution. Applied Statistics 37, 477-484. (PPND16)
double normal_quantile_as241(double u) noexcept {
    static constexpr double a[8] = {
        3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
        1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
        3.3430575583588128105e4, 2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
        2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
        5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
        1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
        2.04426310338993978564e-15};

    auto poly = [](const double* k, double r) {
        return ((((((k[7] * r + k[6]) * r + k[5]) * r + k[4]) * r + k[3]) * r + k[2]) * r + k[1]) * r +
               k[0];
    };

    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = q < 0.0 ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        x = poly(e, r) / poly(f, r);
    }
    return q < 0.0 ? -x : x;
}

}  // namespace detail

namespace {

// Lower-half quantile (u <= 0.5) with one Newton step.
double lower_normal_quantile(double u) {
    const double x0 = detail::normal_quantile_as241(u);
    const double dens = normal_pdf(x0);
    if (dens <= 0.0) return x0;
    return x0 - (normal_cdf(x0) - u) / dens;
}

}  // namespace

double normal_quantile(double u) {
    check_probability(u, "normal_quantile");
    if (u <= 0.5) return lower_normal_quantile(u);
    return -lower_normal_quantile(1.0 - u);
}

double normal_quantile_upper(double q) {
    check_probability(q, "normal_quantile_upper");
    if (q <= 0.5) return -lower_normal_quantile(q);
    return lower_normal_quantile(1.0 - q);
}

// ---------------------------------------------------------------------------
// DistributionSpec
// ---------------------------------------------------------------------------

DistributionSpec::DistributionSpec(StandardNormal v) : v_(v) {}

DistributionSpec::DistributionSpec(Normal v) : v_(v) {
    if (!std::isfinite(v.mean)) throw ValidationError("mean", "normal mean must be finite");
    if (!(v.spread > 0.0) || !std::isfinite(v.spread))
        throw ValidationError("spread", "normal spread must be a positive finite standard deviation");
}

DistributionSpec::DistributionSpec(Uniform v) : v_(v) {
    if (!std::isfinite(v.lo)) throw ValidationError("lo", "uniform lo must be finite");
    if (!std::isfinite(v.hi) || !(v.hi > v.lo)) throw ValidationError("hi", "uniform requires hi > lo");
}

DistributionSpec::DistributionSpec(Pareto v) : v_(v) {
    if (!(v.alpha > 0.0) || !std::isfinite(v.alpha))
        throw ValidationError("alpha", "pareto alpha must be positive");
}

std::string DistributionSpec::family() const {
    return std::visit(overloaded{[](const StandardNormal&) { return std::string("std_normal"); },
                                 [](const Normal&) { return std::string("normal"); },
                                 [](const Uniform&) { return std::string("uniform"); },
                                 [](const Pareto&) { return std::string("pareto"); }},
                      v_);
}

double pdf(const DistributionSpec& spec, double x) noexcept {
    return std::visit(
        overloaded{[&](const StandardNormal&) { return normal_pdf(x); },
                   [&](const Normal& d) { return normal_pdf((x - d.mean) / d.spread) / d.spread; },
                   [&](const Uniform& d) { return (x >= d.lo && x <= d.hi) ? 1.0 / (d.hi - d.lo) : 0.0; },
                   [&](const Pareto& d) { return x >= 1.0 ? d.alpha * std::pow(x, -1.0 - d.alpha) : 0.0; }},
        spec.variant());
}

double cdf(const DistributionSpec& spec, double x) noexcept {
    return std::visit(overloaded{[&](const StandardNormal&) { return normal_cdf(x); },
                                 [&](const Normal& d) { return normal_cdf((x - d.mean) / d.spread); },
                                 [&](const Uniform& d) {
                                     if (x <= d.lo) return 0.0;
                                     if (x >= d.hi) return 1.0;
                                     return (x - d.lo) / (d.hi - d.lo);
                                 },
                                 [&](const Pareto& d) {
                                     if (x <= 1.0) return 0.0;
                                     return -std::expm1(-d.alpha * std::log(x));
                                 }},
                      spec.variant());
}

double sf(const DistributionSpec& spec, double x) noexcept {
    return std::visit(overloaded{[&](const StandardNormal&) { return normal_sf(x); },
                                 [&](const Normal& d) { return normal_sf((x - d.mean) / d.spread); },
                                 [&](const Uniform& d) {
                                     if (x <= d.lo) return 1.0;
                                     if (x >= d.hi) return 0.0;
                                     return (d.hi - x) / (d.hi - d.lo);
                                 },
                                 [&](const Pareto& d) { return x <= 1.0 ? 1.0 : std::pow(x, -d.alpha); }},
                      spec.variant());
}

double quantile(const DistributionSpec& spec, double u) {
    check_probability(u, "quantile");
    return std::visit(overloaded{[&](const StandardNormal&) { return normal_quantile(u); },
                                 [&](const Normal& d) { return d.mean + d.spread * normal_quantile(u); },
                                 [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * u; },
                                 [&](const Pareto& d) { return std::exp(-std::log1p(-u) / d.alpha); }},
                      spec.variant());
}

double quantile_upper(const DistributionSpec& spec, double q) {
    check_probability(q, "quantile_upper");
    return std::visit(overloaded{[&](const StandardNormal&) { return normal_quantile_upper(q); },
                                 [&](const Normal& d) { return d.mean + d.spread * normal_quantile_upper(q); },
                                 [&](const Uniform& d) { return d.hi - (d.hi - d.lo) * q; },
                                 [&](const Pareto& d) { return std::exp(-std::log(q) / d.alpha); }},
                      spec.variant());
}

double support_lower(const DistributionSpec& spec) noexcept {
    return std::visit(overloaded{[](const StandardNormal&) { return -kInf; }, [](const Normal&) { return -kInf; },
                                 [](const Uniform& d) { return d.lo; }, [](const Pareto&) { return 1.0; }},
                      spec.variant());
}

double support_upper(const DistributionSpec& spec) noexcept {
    return std::visit(overloaded{[](const StandardNormal&) { return kInf; }, [](const Normal&) { return kInf; },
                                 [](const Uniform& d) { return d.hi; }, [](const Pareto&) { return kInf; }},
                      spec.variant());
}

double mean(const DistributionSpec& spec) noexcept {
    return std::visit(overloaded{[](const StandardNormal&) { return 0.0; }, [](const Normal& d) { return d.mean; },
                                 [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                                 [](const Pareto& d) { return d.alpha > 1.0 ? d.alpha / (d.alpha - 1.0) : kInf; }},
                      spec.variant());
}

bool has_finite_mean(const DistributionSpec& spec) noexcept { return std::isfinite(mean(spec)); }

bool has_finite_variance(const DistributionSpec& spec) noexcept {
    if (const auto* p = spec.get_if<Pareto>()) return p->alpha > 2.0;
    return true;
}

bool is_symmetric(const DistributionSpec& spec) noexcept { return spec.get_if<Pareto>() == nullptr; }

}  // namespace optistop
