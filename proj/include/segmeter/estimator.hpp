#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace segmeter {

// Connectivity-test outcomes X_i in {0,1}.
using BernoulliOutcomes = std::span<const std::uint8_t>;

std::size_t count_successes(BernoulliOutcomes outcomes) noexcept;

struct PointEstimate {
    double flatness = 0.0;       // F_hat = k / M
    double segmentedness = 1.0;  // S_hat = 1 - F_hat
};

// Throws DomainError on empty outcomes or k > M.
PointEstimate point_estimate(BernoulliOutcomes outcomes);
PointEstimate point_estimate(std::size_t successes, std::size_t samples);

// Standard normal CDF via erfc.
double normal_cdf(double x) noexcept;

// Upper-tail quantile: z with Phi(z) = 1 - tail. Acklam's rational
// approximation refined by one Newton step. Throws DomainError unless
// 0 < tail < 1.
double normal_quantile(double tail);

// Two-sided critical value z_{alpha/2} for confidence `level`.
double critical_value(double level);

struct Interval {
    double low = 0.0;
    double high = 0.0;
    bool clamped = false;     // an endpoint was pulled back into [0,1]
    bool degenerate = false;  // zero width

    double width() const noexcept { return high - low; }
    bool contains(double x) const noexcept { return low <= x && x <= high; }
};

// F_hat +/- z * sqrt(F_hat (1 - F_hat) / M), clamped to [0,1]. The same
// half-width applies to S_hat. Degenerate (zero width) at F_hat in {0,1}.
Interval wald_interval(double flatness, std::size_t samples, double level);

// 1 / (2 sqrt(M)): the standard error at p = 0.5, an upper bound for all p.
double worst_case_se(std::size_t samples);

// Smallest M with M >= z^2 / (4 eps^2); independent of network size.
std::size_t required_sample_size(double level, double epsilon);

}  // namespace segmeter
