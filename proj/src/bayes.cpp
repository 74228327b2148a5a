#include "segmeter/bayes.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "segmeter/errors.hpp"

namespace segmeter {

void validate(const PosteriorBeta& b) {
    if (!(b.alpha > 0.0 && b.beta > 0.0 && std::isfinite(b.alpha) && std::isfinite(b.beta)))
        throw DomainError("Beta parameters must be positive, got (" + std::to_string(b.alpha) + ", " +
                          std::to_string(b.beta) + ")");
}

PosteriorBeta bayes_update(const PosteriorBeta& prior, std::size_t successes, std::size_t trials) {
    validate(prior);
    if (successes > trials) throw DomainError("successes exceed trials in Beta update");
    return {prior.alpha + static_cast<double>(successes), prior.beta + static_cast<double>(trials)};
}

double beta_mean(const PosteriorBeta& b) {
    validate(b);
    return b.alpha / (b.alpha + b.beta);
}

double beta_cdf(const PosteriorBeta& b, double x) {
    validate(b);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(b.alpha, b.beta, x);
}

double beta_upper_quantile(const PosteriorBeta& b, double mass) {
    validate(b);
    if (!(mass > 0.0 && mass < 1.0))
        throw DomainError("quantile mass must lie in (0,1), got " + std::to_string(mass));
    constexpr int max_iterations = 200;
    constexpr double tolerance = 1e-13;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tolerance) return mid;
        const double cdf = beta_cdf(b, mid);
        if (!std::isfinite(cdf))
            throw NumericalError("incomplete beta returned a non-finite value at x=" + std::to_string(mid));
        (cdf < mass ? lo : hi) = mid;
    }
    throw NumericalError("Beta quantile bisection did not converge");
}

}  // namespace segmeter
