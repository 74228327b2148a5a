#include "segmeter/report.hpp"

#include <fmt/format.h>

#include "segmeter/errors.hpp"

namespace segmeter {

std::string_view to_string(Method m) noexcept { return m == Method::wald ? "Wald" : "Bayes"; }

Interval EstimateReport::segmentedness_interval() const noexcept {
    Interval s = interval;
    s.low = 1.0 - interval.high;
    s.high = 1.0 - interval.low;
    return s;
}

EstimateReport wald_report(std::size_t successes, std::size_t samples, double level) {
    const auto est = point_estimate(successes, samples);
    EstimateReport r;
    r.samples = samples;
    r.successes = successes;
    r.flatness = est.flatness;
    r.segmentedness = est.segmentedness;
    r.level = level;
    r.interval = wald_interval(est.flatness, samples, level);
    r.method = Method::wald;
    return r;
}

EstimateReport estimate_with_policy(std::size_t successes, std::size_t samples, double level,
                                    const PosteriorBeta& prior) {
    EstimateReport r = wald_report(successes, samples, level);
    if (successes != 0 && successes != samples) return r;

    // Boundary: the posterior concerns whichever side saw no successes.
    r.mirrored = successes == samples;
    const auto post = bayes_update(prior, 0, samples);
    const double upper = beta_upper_quantile(post, level);
    const double mean = beta_mean(post);
    r.method = Method::bayes;
    r.posterior = post;
    if (r.mirrored) {
        r.posterior_mean = 1.0 - mean;
        r.interval = Interval{1.0 - upper, 1.0};
    } else {
        r.posterior_mean = mean;
        r.interval = Interval{0.0, upper};
    }
    return r;
}

EstimateReport estimate_with_policy(BernoulliOutcomes outcomes, double level, const PosteriorBeta& prior) {
    if (outcomes.empty()) throw DomainError("estimate needs at least one outcome");
    return estimate_with_policy(count_successes(outcomes), outcomes.size(), level, prior);
}

nlohmann::ordered_json to_json(const EstimateReport& r) {
    nlohmann::ordered_json j;
    j["M"] = r.samples;
    j["k"] = r.successes;
    j["F_hat"] = r.flatness;
    j["S_hat"] = r.segmentedness;
    j["level"] = r.level;
    j["low"] = r.interval.low;
    j["high"] = r.interval.high;
    j["method"] = to_string(r.method);
    j["seed"] = r.seed;
    j["clamped"] = r.interval.clamped;
    j["degenerate"] = r.interval.degenerate;
    if (r.posterior) {
        j["posterior_alpha"] = r.posterior->alpha;
        j["posterior_beta"] = r.posterior->beta;
        j["posterior_mean_F"] = *r.posterior_mean;
        j["mirrored"] = r.mirrored;
    }
    return j;
}

std::string to_json_line(const EstimateReport& r) { return to_json(r).dump(); }

std::string to_text(const EstimateReport& r) {
    const auto s = r.segmentedness_interval();
    const int pct = static_cast<int>(r.level * 100.0 + 0.5);
    std::string out;
    out += fmt::format("method          {}{}\n", to_string(r.method),
                       r.method == Method::bayes ? (r.mirrored ? " (boundary k=M, prior on segmentedness)"
                                                               : " (boundary k=0)")
                                                 : "");
    out += fmt::format("pairs tested M  {}\n", r.samples);
    out += fmt::format("connected k     {}\n", r.successes);
    out += fmt::format("flatness F      {:.6f}  {}% {} [{:.6f}, {:.6f}]{}\n", r.flatness, pct,
                       r.method == Method::bayes ? "credible" : "CI", r.interval.low, r.interval.high,
                       r.interval.clamped ? " (clamped)" : "");
    out += fmt::format("segmentedness S {:.6f}  {}% {} [{:.6f}, {:.6f}]\n", r.segmentedness, pct,
                       r.method == Method::bayes ? "credible" : "CI", s.low, s.high);
    if (r.posterior) {
        out += fmt::format("posterior       Beta({:g}, {:g}), mean F {:.6f}\n", r.posterior->alpha,
                           r.posterior->beta, *r.posterior_mean);
    }
    out += fmt::format("seed            {}\n", r.seed);
    return out;
}

}  // namespace segmeter
