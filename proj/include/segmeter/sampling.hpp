#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "segmeter/graph.hpp"

namespace segmeter {

enum class SampleMode { with_replacement, without_replacement };

std::string_view to_string(SampleMode mode) noexcept;
// Accepts "with-replacement" / "without-replacement"; throws ConfigError.
SampleMode parse_sample_mode(std::string_view text);

struct PairSamplePlan {
    std::size_t n = 0;
    std::size_t samples = 0;  // M
    SampleMode mode = SampleMode::with_replacement;
    std::uint64_t seed = 0;
};

// Draws `plan.samples` unordered pairs of distinct nodes uniformly from the
// C(n,2) possibilities. With replacement the draws are i.i.d.; without
// replacement they are distinct and in random order. Deterministic per seed.
std::vector<NodePair> sample_pairs(const PairSamplePlan& plan);

// Lexicographic rank of a canonical pair among the C(n,2) pairs, and its
// inverse.
std::uint64_t pair_rank(NodePair p, std::uint64_t n) noexcept;
NodePair pair_from_rank(std::uint64_t rank, std::uint64_t n);

// Independent child seed for (stream, index); order-independent so trials
// can run in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace segmeter
