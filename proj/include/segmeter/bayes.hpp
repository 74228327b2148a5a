#pragma once

#include <cstddef>

namespace segmeter {

// Beta(alpha, beta) prior/posterior for flatness when the sample sits on a
// boundary (no connections observed).
struct PosteriorBeta {
    double alpha = 1.0;
    double beta = 99.0;
};

// Prior centred at 1% flatness.
inline constexpr PosteriorBeta kDefaultPrior{1.0, 99.0};

// Throws DomainError unless alpha > 0 and beta > 0.
void validate(const PosteriorBeta& b);

// Beta(alpha + k, beta + M). Note the beta update adds all M trials; for
// k = 0 this coincides with the conjugate Beta-binomial update.
PosteriorBeta bayes_update(const PosteriorBeta& prior, std::size_t successes, std::size_t trials);

double beta_mean(const PosteriorBeta& b);

// Regularized incomplete beta I_x(alpha, beta), i.e. the Beta CDF.
double beta_cdf(const PosteriorBeta& b, double x);

// q with beta_cdf(b, q) == mass, by bisection (|error| <= 1e-13). Throws
// NumericalError if the iteration cap is hit or the CDF misbehaves.
double beta_upper_quantile(const PosteriorBeta& b, double mass);

}  // namespace segmeter
