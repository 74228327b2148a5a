#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "segmeter/errors.hpp"
#include "segmeter/generators.hpp"
#include "segmeter/graph.hpp"
#include "segmeter/kernels.hpp"
#include "segmeter/sampling.hpp"

using namespace segmeter;

TEST(Generators, ErExtremes) {
    EXPECT_EQ(materialize(er_oracle({50, 0.0, 1})).edge_count(), 0u);
    EXPECT_EQ(materialize(er_oracle({50, 1.0, 1})).edge_count(), max_possible_edges(50));
    EXPECT_THROW(er_oracle({50, 1.5, 1}), ConfigError);
    EXPECT_THROW(er_oracle({1, 0.5, 1}), ConfigError);
}

TEST(Generators, OracleIsSymmetricAndSeedStable) {
    auto a = er_oracle({1000, 0.3, 7});
    auto b = er_oracle({1000, 0.3, 7});
    auto c = er_oracle({1000, 0.3, 8});
    std::size_t differ = 0;
    for (NodeId u = 0; u < 200; ++u)
        for (NodeId v = u + 1; v < 200; ++v) {
            EXPECT_EQ(a(u, v), a(v, u));
            EXPECT_EQ(a(u, v), b(u, v));
            differ += a(u, v) != c(u, v) ? 1 : 0;
        }
    EXPECT_GT(differ, 0u);
}

TEST(Generators, ErDensityWithinBinomialBand) {
    const std::size_t n = 600;
    const double p = 0.2;
    const Graph g = materialize(er_oracle({n, p, 11}));
    const double pairs = static_cast<double>(max_possible_edges(n));
    const double sd = std::sqrt(p * (1 - p) / pairs);
    EXPECT_NEAR(edge_density(g), p, 4 * sd);
}

TEST(Generators, SbmCliquesWhenPoutZero) {
    const Graph g = materialize(sbm_oracle({100, 5, 1.0, 0.0, 3}));
    EXPECT_EQ(g.edge_count(), 5u * 190u);
    EXPECT_TRUE(g.has_edge(0, 19));
    EXPECT_FALSE(g.has_edge(19, 20));
}

TEST(Generators, SbmEqualProbabilitiesIsEr) {
    const SBMConfig cfg{400, 4, 0.25, 0.25, 9};
    EXPECT_DOUBLE_EQ(sbm_global_density(cfg), 0.25);
    EXPECT_NEAR(sbm_expected_density(cfg), 0.25, 1e-15);
}

TEST(Generators, SbmDensityFormulas) {
    const SBMConfig cfg{100, 5, 0.6, 0.1, 1};
    EXPECT_NEAR(sbm_global_density(cfg), 0.6 / 5 + 0.8 * 0.1, 1e-15);
    // Finite n: within-block share is 5*C(20,2)/C(100,2) = 950/4950.
    const double w = 950.0 / 4950.0;
    EXPECT_NEAR(sbm_expected_density(cfg), w * 0.6 + (1 - w) * 0.1, 1e-15);
}

TEST(Generators, SolvePInInvertsGlobalDensity) {
    for (double p_out : {0.1, 0.2}) {
        for (double target = 0.1; target <= 0.3; target += 0.05) {
            if (target < 0.8 * p_out || target > 0.2 + 0.8 * p_out) continue;
            const double p_in = solve_p_in(target, 5, p_out);
            EXPECT_NEAR(sbm_global_density({1000, 5, p_in, p_out, 0}), target, 1e-12);
        }
    }
    EXPECT_THROW(solve_p_in(0.5, 5, 0.1), InfeasibleError);
    EXPECT_THROW(solve_p_in(0.01, 5, 0.2), InfeasibleError);
}

TEST(Generators, BatchedEvaluationMatchesPointwise) {
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        const auto prev = kernels::force_isa(isa);
        for (const auto& oracle : {er_oracle({5000, 0.37, 4}), sbm_oracle({5000, 5, 0.7, 0.05, 4})}) {
            const auto pairs = sample_pairs({5000, 4099, SampleMode::with_replacement, 12});
            std::vector<std::uint8_t> out(pairs.size());
            oracle.evaluate(pairs, out);
            std::size_t expected = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const bool e = oracle(pairs[i].u, pairs[i].v);
                ASSERT_EQ(out[i] != 0, e);
                expected += e ? 1 : 0;
            }
            EXPECT_EQ(oracle.count_edges(pairs), expected);
        }
        kernels::force_isa(prev);
    }
}

TEST(Generators, MaterializeGuard) {
    EXPECT_THROW(materialize(er_oracle({kMaterializeLimit + 1, 0.0, 1})), DomainError);
}

TEST(Generators, RandomGraphWithExactEdgeCount) {
    const Graph g = random_graph_with_edges(86, 150, 5);
    EXPECT_EQ(g.node_count(), 86u);
    EXPECT_EQ(g.edge_count(), 150u);
    EXPECT_THROW(random_graph_with_edges(4, 7, 1), DomainError);
}

TEST(Generators, ConfigFileParsing) {
    std::istringstream in("# sbm\nn = 1000\nK=5\np_in=0.6\np_out=0.1\nseed=42\n");
    const auto cfg = parse_model_config(in);
    EXPECT_EQ(*cfg.n, 1000u);
    EXPECT_EQ(*cfg.blocks, 5u);
    EXPECT_DOUBLE_EQ(*cfg.p_in, 0.6);
    EXPECT_EQ(*cfg.seed, 42u);
    EXPECT_FALSE(cfg.p.has_value());
    std::istringstream bad("n=10\nbogus=1\n");
    EXPECT_THROW(parse_model_config(bad), ParseError);
}
