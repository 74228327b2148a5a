#include "segmeter/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "segmeter/errors.hpp"
#include "segmeter/kernels.hpp"

namespace segmeter {

std::string_view to_string(SampleMode mode) noexcept {
    return mode == SampleMode::with_replacement ? "with-replacement" : "without-replacement";
}

SampleMode parse_sample_mode(std::string_view text) {
    if (text == "with-replacement") return SampleMode::with_replacement;
    if (text == "without-replacement") return SampleMode::without_replacement;
    throw ConfigError("unknown sampling mode '" + std::string(text) +
                      "' (expected with-replacement or without-replacement)");
}

namespace {

// First rank of row u: sum_{i<u} (n - 1 - i).
std::uint64_t row_offset(std::uint64_t u, std::uint64_t n) noexcept {
    return u * (2 * n - u - 1) / 2;
}

}  // namespace

std::uint64_t pair_rank(NodePair p, std::uint64_t n) noexcept {
    return row_offset(p.u, n) + (p.v - p.u - 1);
}

NodePair pair_from_rank(std::uint64_t rank, std::uint64_t n) {
    if (n < 2 || rank >= max_possible_edges(n))
        throw DomainError("pair rank " + std::to_string(rank) + " out of range for n=" + std::to_string(n));
    const long double b = 2.0L * static_cast<long double>(n) - 1.0L;
    const long double disc = b * b - 8.0L * static_cast<long double>(rank);
    auto u = static_cast<std::uint64_t>(std::max(0.0L, std::floor((b - std::sqrt(std::max(0.0L, disc))) / 2.0L)));
    u = std::min<std::uint64_t>(u, n - 2);
    while (u > 0 && row_offset(u, n) > rank) --u;
    while (u + 1 <= n - 2 && row_offset(u + 1, n) <= rank) ++u;
    const std::uint64_t v = u + 1 + (rank - row_offset(u, n));
    return {static_cast<NodeId>(u), static_cast<NodeId>(v)};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
    using kernels::mix64;
    std::uint64_t h = mix64(master + kernels::kGolden);
    h = mix64(h ^ mix64(stream + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(index + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

std::vector<NodePair> sample_pairs(const PairSamplePlan& plan) {
    if (plan.n < 2) throw DomainError("pair sampling needs at least 2 nodes");
    if (plan.samples < 1) throw DomainError("pair sampling needs M >= 1");
    if (plan.n > std::size_t{0xffffffffULL}) throw DomainError("node count exceeds 32-bit ids");
    const std::uint64_t total = max_possible_edges(plan.n);

    std::mt19937_64 rng(plan.seed);
    std::vector<NodePair> out;
    out.reserve(plan.samples);

    if (plan.mode == SampleMode::with_replacement) {
        std::uniform_int_distribution<std::uint64_t> first(0, plan.n - 1);
        std::uniform_int_distribution<std::uint64_t> second(0, plan.n - 2);
        for (std::size_t i = 0; i < plan.samples; ++i) {
            const auto a = first(rng);
            auto b = second(rng);
            if (b >= a) ++b;
            out.push_back(make_pair(static_cast<NodeId>(a), static_cast<NodeId>(b)));
        }
        return out;
    }

    if (plan.samples > total)
        throw DomainError("cannot draw " + std::to_string(plan.samples) + " distinct pairs from " +
                          std::to_string(total));
    // Floyd's subset sampling over pair ranks, then a shuffle for random order.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(plan.samples * 2);
    std::vector<std::uint64_t> ranks;
    ranks.reserve(plan.samples);
    for (std::uint64_t j = total - plan.samples; j < total; ++j) {
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        const auto pick = chosen.insert(t).second ? t : j;
        if (pick == j) chosen.insert(j);
        ranks.push_back(pick);
    }
    std::shuffle(ranks.begin(), ranks.end(), rng);
    for (auto r : ranks) out.push_back(pair_from_rank(r, plan.n));
    return out;
}

}  // namespace segmeter
