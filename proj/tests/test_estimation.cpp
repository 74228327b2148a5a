#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>

#include "segmeter/bayes.hpp"
#include "segmeter/errors.hpp"
#include "segmeter/estimator.hpp"
#include "segmeter/report.hpp"
#include "segmeter/sampling.hpp"

using namespace segmeter;

namespace {

// Upper-tail mass of N(0,1) by composite Simpson on [x, 12]; an oracle
// independent of erfc and of the rational quantile approximation.
double upper_tail_by_quadrature(double x) {
    const int steps = 20000;
    const double b = 12.0;
    const double h = (b - x) / steps;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double s = pdf(x) + pdf(b);
    for (int i = 1; i < steps; ++i) s += pdf(x + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double quantile_by_bisection(double tail) {
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (upper_tail_by_quadrature(mid) > tail ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Sampling, RankRoundTripSmall) {
    for (std::uint64_t n = 2; n < 40; ++n) {
        std::uint64_t rank = 0;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v, ++rank) {
                EXPECT_EQ(pair_rank({u, v}, n), rank);
                EXPECT_EQ(pair_from_rank(rank, n), (NodePair{u, v}));
            }
    }
}

TEST(Sampling, RankRoundTripLarge) {
    const std::uint64_t n = 3'000'000'000ULL;
    const std::uint64_t total = n * (n - 1) / 2;
    for (std::uint64_t r : std::vector<std::uint64_t>{0, 1, n - 2, n - 1, total / 2, total - 2, total - 1}) {
        const auto p = pair_from_rank(r, n);
        EXPECT_LT(p.u, p.v);
        EXPECT_EQ(pair_rank(p, n), r);
    }
    EXPECT_THROW(pair_from_rank(total, n), DomainError);
}

TEST(Sampling, PairsAreCanonicalAndDeterministic) {
    const PairSamplePlan plan{1000, 500, SampleMode::with_replacement, 99};
    const auto a = sample_pairs(plan);
    EXPECT_EQ(a, sample_pairs(plan));
    for (const auto& p : a) {
        EXPECT_LT(p.u, p.v);
        EXPECT_LT(p.v, 1000u);
    }
    auto other = plan;
    other.seed = 100;
    EXPECT_NE(a, sample_pairs(other));
}

TEST(Sampling, WithoutReplacementIsDistinct) {
    const auto pairs = sample_pairs({30, 435, SampleMode::without_replacement, 5});
    std::set<NodePair> seen(pairs.begin(), pairs.end());
    EXPECT_EQ(seen.size(), 435u);
    EXPECT_THROW(sample_pairs({30, 436, SampleMode::without_replacement, 5}), DomainError);
}

TEST(Sampling, UniformOverPairsChiSquare) {
    // n=5 has 10 pairs; df=9, 0.999 quantile is 27.88.
    for (auto mode : {SampleMode::with_replacement, SampleMode::without_replacement}) {
        std::array<double, 10> counts{};
        const int reps = mode == SampleMode::with_replacement ? 1 : 20000;
        const std::size_t m = mode == SampleMode::with_replacement ? 200000 : 3;
        for (int r = 0; r < reps; ++r)
            for (const auto& p : sample_pairs({5, m, mode, derive_seed(1, 0, r)})) counts[pair_rank(p, 5)] += 1;
        double total = 0;
        for (double c : counts) total += c;
        double chi = 0;
        for (double c : counts) chi += (c - total / 10) * (c - total / 10) / (total / 10);
        EXPECT_LT(chi, 27.88) << to_string(mode);
    }
}

TEST(Sampling, ModeNames) {
    EXPECT_EQ(parse_sample_mode("without-replacement"), SampleMode::without_replacement);
    EXPECT_EQ(to_string(SampleMode::with_replacement), "with-replacement");
    EXPECT_THROW(parse_sample_mode("sometimes"), ConfigError);
}

TEST(Estimator, PointEstimateComplements) {
    const std::vector<std::uint8_t> o{1, 0, 1, 1, 0};
    const auto e = point_estimate(o);
    EXPECT_DOUBLE_EQ(e.flatness, 0.6);
    EXPECT_DOUBLE_EQ(e.flatness + e.segmentedness, 1.0);
    EXPECT_THROW(point_estimate(std::vector<std::uint8_t>{}), DomainError);
}

TEST(Estimator, CriticalValuesAgainstQuadratureOracle) {
    for (double level : {0.90, 0.95, 0.99}) {
        const double oracle = quantile_by_bisection((1 - level) / 2);
        EXPECT_NEAR(critical_value(level), oracle, 1e-9) << level;
    }
    EXPECT_NEAR(critical_value(0.99), 2.5758293035489, 1e-12);
    EXPECT_NEAR(critical_value(0.95), 1.9599639845401, 1e-12);
    EXPECT_NEAR(critical_value(0.90), 1.6448536269515, 1e-12);
}

TEST(Estimator, RequiredSampleSizeTables) {
    EXPECT_EQ(required_sample_size(0.90, 0.1), 68u);
    EXPECT_EQ(required_sample_size(0.95, 0.1), 97u);
    EXPECT_EQ(required_sample_size(0.99, 0.1), 166u);
    EXPECT_EQ(required_sample_size(0.90, 0.05), 271u);
    EXPECT_EQ(required_sample_size(0.95, 0.05), 385u);
    EXPECT_EQ(required_sample_size(0.99, 0.05), 664u);
    EXPECT_THROW(required_sample_size(1.0, 0.1), DomainError);
    EXPECT_THROW(required_sample_size(0.95, 0.0), DomainError);
}

TEST(Estimator, WorstCaseHalfWidthHonorsEpsilon) {
    for (double level : {0.90, 0.95, 0.99})
        for (double eps : {0.1, 0.05, 0.02}) {
            const auto m = required_sample_size(level, eps);
            EXPECT_LE(critical_value(level) * worst_case_se(m), eps);
            EXPECT_GT(critical_value(level) * worst_case_se(m - 1), eps);
        }
}

TEST(Estimator, WaldIntervalShapes) {
    const auto mid = wald_interval(0.5, 97, 0.95);
    const double half = 1.959963984540054 * std::sqrt(0.25 / 97);
    EXPECT_NEAR(mid.low, 0.5 - half, 1e-12);
    EXPECT_NEAR(mid.high, 0.5 + half, 1e-12);
    EXPECT_FALSE(mid.clamped);

    const auto one = wald_interval(1.0, 10, 0.95);
    EXPECT_EQ(one.low, 1.0);
    EXPECT_EQ(one.high, 1.0);
    EXPECT_TRUE(one.degenerate);

    const auto low = wald_interval(0.02, 20, 0.95);
    EXPECT_EQ(low.low, 0.0);
    EXPECT_TRUE(low.clamped);
}

TEST(Estimator, WaldWidthShrinksAsRootM) {
    const double w1 = wald_interval(0.3, 100, 0.95).width();
    const double w4 = wald_interval(0.3, 400, 0.95).width();
    EXPECT_NEAR(w1 / w4, 2.0, 1e-12);
}

TEST(Bayes, UpdateAndMoments) {
    const auto post = bayes_update(kDefaultPrior, 0, 97);
    EXPECT_DOUBLE_EQ(post.alpha, 1.0);
    EXPECT_DOUBLE_EQ(post.beta, 196.0);
    EXPECT_NEAR(beta_mean(post), 1.0 / 197.0, 1e-15);
    EXPECT_THROW(validate(PosteriorBeta{0.0, 1.0}), DomainError);
}

TEST(Bayes, QuantileMatchesClosedFormForAlphaOne) {
    // Beta(1, b): CDF 1-(1-x)^b, so the q-quantile is 1-(1-q)^(1/b).
    for (double b : {1.0, 2.5, 99.0, 196.0, 5000.0})
        for (double q : {0.5, 0.9, 0.95, 0.99}) {
            const double expect = 1.0 - std::pow(1.0 - q, 1.0 / b);
            EXPECT_NEAR(beta_upper_quantile({1.0, b}, q), expect, 1e-11) << b << " " << q;
        }
}

TEST(Bayes, CdfMonotoneAndQuantileInverts) {
    const PosteriorBeta b{3.5, 40.0};
    double prev = 0.0;
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const double c = beta_cdf(b, x);
        EXPECT_GE(c, prev);
        prev = c;
    }
    EXPECT_NEAR(beta_cdf(b, beta_upper_quantile(b, 0.8)), 0.8, 1e-10);
}

TEST(Report, PolicyChoosesMethodByBoundary) {
    const auto w = estimate_with_policy(30, 97, 0.95);
    EXPECT_EQ(w.method, Method::wald);
    EXPECT_FALSE(w.posterior.has_value());

    const auto zero = estimate_with_policy(0, 97, 0.95);
    EXPECT_EQ(zero.method, Method::bayes);
    EXPECT_EQ(zero.interval.low, 0.0);
    EXPECT_NEAR(zero.interval.high, 1.0 - std::pow(0.05, 1.0 / 196.0), 1e-11);
    EXPECT_NEAR(*zero.posterior_mean, 1.0 / 197.0, 1e-15);
    EXPECT_FALSE(zero.mirrored);

    const auto all = estimate_with_policy(97, 97, 0.95);
    EXPECT_EQ(all.method, Method::bayes);
    EXPECT_TRUE(all.mirrored);
    EXPECT_EQ(all.interval.high, 1.0);
    EXPECT_NEAR(all.interval.low, 1.0 - zero.interval.high, 1e-15);
    EXPECT_NEAR(all.segmentedness_interval().high, zero.interval.high, 1e-15);
}

TEST(Report, JsonRecordFields) {
    const auto j = to_json(estimate_with_policy(0, 97, 0.95));
    EXPECT_EQ(j["method"], "Bayes");
    EXPECT_EQ(j["k"], 0);
    EXPECT_EQ(j["M"], 97);
    EXPECT_DOUBLE_EQ(j["posterior_beta"].get<double>(), 196.0);
    const auto w = to_json(estimate_with_policy(40, 97, 0.95));
    EXPECT_EQ(w["method"], "Wald");
    EXPECT_FALSE(w.contains("posterior_alpha"));
}
