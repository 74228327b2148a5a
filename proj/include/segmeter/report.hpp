#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "segmeter/bayes.hpp"
#include "segmeter/estimator.hpp"

namespace segmeter {

enum class Method { wald, bayes };

std::string_view to_string(Method m) noexcept;

// Result of one measurement: M tested pairs, k connected.
struct EstimateReport {
    std::size_t samples = 0;     // M
    std::size_t successes = 0;   // k
    double flatness = 0.0;       // k / M
    double segmentedness = 1.0;  // 1 - k / M
    double level = 0.95;
    Interval interval;  // for flatness
    Method method = Method::wald;
    // Bayes path only. `mirrored` means the boundary was k == M and the prior
    // was placed on segmentedness instead of flatness.
    std::optional<PosteriorBeta> posterior;
    std::optional<double> posterior_mean;  // of flatness
    bool mirrored = false;
    std::uint64_t seed = 0;

    // [1 - high, 1 - low].
    Interval segmentedness_interval() const noexcept;
};

// Plain Wald report (no boundary handling).
EstimateReport wald_report(std::size_t successes, std::size_t samples, double level);

// Wald when 0 < k < M. At k = 0 the Wald interval collapses to a point, so
// the Beta posterior is used instead: the interval becomes [0, q] where q is
// the `level` posterior quantile. k = M is handled the same way on the
// segmentedness side.
EstimateReport estimate_with_policy(std::size_t successes, std::size_t samples, double level,
                                    const PosteriorBeta& prior = kDefaultPrior);
EstimateReport estimate_with_policy(BernoulliOutcomes outcomes, double level,
                                    const PosteriorBeta& prior = kDefaultPrior);

nlohmann::ordered_json to_json(const EstimateReport& r);
// Single-line machine record.
std::string to_json_line(const EstimateReport& r);
// Human-readable block.
std::string to_text(const EstimateReport& r);

}  // namespace segmeter
