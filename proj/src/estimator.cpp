#include "segmeter/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "segmeter/errors.hpp"

namespace segmeter {

std::size_t count_successes(BernoulliOutcomes outcomes) noexcept {
    std::size_t k = 0;
    for (auto x : outcomes) k += x ? 1 : 0;
    return k;
}

PointEstimate point_estimate(std::size_t successes, std::size_t samples) {
    if (samples == 0) throw DomainError("point estimate needs at least one outcome");
    if (successes > samples) throw DomainError("successes exceed sample count");
    const double f = static_cast<double>(successes) / static_cast<double>(samples);
    return {f, 1.0 - f};
}

PointEstimate point_estimate(BernoulliOutcomes outcomes) {
    return point_estimate(count_successes(outcomes), outcomes.size());
}

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Acklam's inverse normal CDF, relative error below 1.15e-9.
double acklam_lower_quantile(double p) {
    constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                      6.680131188771972e+01,  -1.328068155288572e+01};
    constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                      3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double tail) {
    if (!(tail > 0.0 && tail < 1.0))
        throw DomainError("normal quantile tail must lie in (0,1), got " + std::to_string(tail));
    if (tail == 0.5) return 0.0;
    // Work on the lower quantile of `tail` so small tails keep full precision.
    double x = acklam_lower_quantile(tail);
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    x -= (normal_cdf(x) - tail) / pdf;
    return -x;
}

double critical_value(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0,1), got " + std::to_string(level));
    return normal_quantile((1.0 - level) / 2.0);
}

Interval wald_interval(double flatness, std::size_t samples, double level) {
    if (samples == 0) throw DomainError("Wald interval needs M >= 1");
    if (!(flatness >= 0.0 && flatness <= 1.0)) throw DomainError("estimate must lie in [0,1]");
    const double z = critical_value(level);
    const double half = z * std::sqrt(flatness * (1.0 - flatness) / static_cast<double>(samples));
    Interval iv{flatness - half, flatness + half};
    if (iv.low < 0.0 || iv.high > 1.0) {
        iv.low = std::max(iv.low, 0.0);
        iv.high = std::min(iv.high, 1.0);
        iv.clamped = true;
    }
    iv.degenerate = half == 0.0;
    return iv;
}

double worst_case_se(std::size_t samples) {
    if (samples == 0) throw DomainError("standard error needs M >= 1");
    return 1.0 / (2.0 * std::sqrt(static_cast<double>(samples)));
}

std::size_t required_sample_size(double level, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("half-width must lie in (0,1), got " + std::to_string(epsilon));
    const double z = critical_value(level);
    return static_cast<std::size_t>(std::ceil(z * z / (4.0 * epsilon * epsilon)));
}

}  // namespace segmeter
