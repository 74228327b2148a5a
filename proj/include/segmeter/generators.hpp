#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "segmeter/graph.hpp"

namespace segmeter {

// Erdős–Rényi G(n, p).
struct ERConfig {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

// Stochastic block model with K equal, contiguous blocks:
// block b holds nodes [b*n/K, (b+1)*n/K).
struct SBMConfig {
    std::size_t n = 0;
    std::size_t blocks = 1;  // K
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;
};

// Both throw ConfigError when an invariant is violated.
void validate(const ERConfig& cfg);
void validate(const SBMConfig& cfg);

// Large-n global density: p_in / K + (K - 1) / K * p_out.
double sbm_global_density(const SBMConfig& cfg);

// Exact expected density at finite n, where the fraction of within-block
// pairs is (n/K - 1) / (n - 1) rather than 1/K.
double sbm_expected_density(const SBMConfig& cfg);

// p_in giving sbm_global_density == target. Throws InfeasibleError when the
// solution falls outside [0, 1].
double solve_p_in(double target_density, std::size_t blocks, double p_out);

// Deterministic per-pair Bernoulli source. Each unordered pair is decided by
// a keyed hash of (seed, min, max) compared against a probability threshold,
// so the oracle stores no state and can answer for n = 100000 without
// materializing the graph. Copyable and safe for concurrent queries.
class PairOracle {
public:
    static PairOracle erdos_renyi(const ERConfig& cfg);
    static PairOracle block_model(const SBMConfig& cfg);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t block_of(NodeId u) const noexcept { return blocks_ == 1 ? 0 : u * blocks_ / n_; }

    bool operator()(NodeId a, NodeId b) const;

    // Writes 0/1 per pair. Pairs must be canonical and in range.
    void evaluate(std::span<const NodePair> pairs, std::span<std::uint8_t> out) const;

    // Number of pairs the oracle answers true for.
    std::size_t count_edges(std::span<const NodePair> pairs) const;

private:
    struct Threshold {
        std::uint64_t value = 0;  // edge iff hash < value ...
        bool always = false;      // ... unless p == 1
    };
    static Threshold threshold_for(double p) noexcept;
    const Threshold& threshold(NodePair p) const noexcept;
    static bool passes(const Threshold& t, std::uint64_t h) noexcept { return t.always || h < t.value; }

    std::size_t n_ = 0;
    std::size_t blocks_ = 1;
    std::uint64_t key_ = 0;
    Threshold within_;
    Threshold between_;
};

PairOracle er_oracle(const ERConfig& cfg);
PairOracle sbm_oracle(const SBMConfig& cfg);

inline constexpr std::size_t kMaterializeLimit = 20000;

// Graph whose edges are exactly the oracle's true pairs among nodes [0, n).
// Refuses n > kMaterializeLimit unless allow_large is set.
Graph materialize(const PairOracle& oracle, std::size_t n, bool allow_large = false);
Graph materialize(const PairOracle& oracle, bool allow_large = false);

// Uniformly random graph with exactly `edges` edges (G(n, m)).
Graph random_graph_with_edges(std::size_t n, std::uint64_t edges, std::uint64_t seed);

// key=value model configuration (n, K, p, p_in, p_out, seed); '#' comments.
struct ModelConfigFile {
    std::optional<std::size_t> n;
    std::optional<std::size_t> blocks;
    std::optional<double> p;
    std::optional<double> p_in;
    std::optional<double> p_out;
    std::optional<std::uint64_t> seed;
};

ModelConfigFile parse_model_config(std::istream& in);

}  // namespace segmeter
