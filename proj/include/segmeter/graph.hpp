#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

namespace segmeter {

using NodeId = std::uint32_t;

// Unordered pair of distinct nodes, stored canonically with u < v.
struct NodePair {
    NodeId u = 0;
    NodeId v = 0;

    friend bool operator==(const NodePair&, const NodePair&) = default;
    friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// Canonical pair; throws DomainError when a == b.
NodePair make_pair(NodeId a, NodeId b);

constexpr std::uint64_t pack(NodePair p) noexcept {
    return (std::uint64_t{p.u} << 32) | p.v;
}

constexpr NodePair unpack(std::uint64_t key) noexcept {
    return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffULL)};
}

// C(n,2). Throws DomainError for n == 0.
std::uint64_t max_possible_edges(std::uint64_t n);

// Immutable undirected simple graph on nodes [0, n).
//
// Edges live in a hashed set of packed canonical pairs for O(1) membership
// and in a CSR adjacency for neighbourhood scans. Safe to share across
// threads once constructed.
class Graph {
public:
    // Duplicate pairs (in either orientation) collapse. Self-loops and
    // out-of-range endpoints throw DomainError.
    Graph(std::size_t node_count, std::span<const NodePair> edges);

    static Graph empty(std::size_t n);
    static Graph complete(std::size_t n);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_edge(NodeId a, NodeId b) const noexcept;

    // Sorted canonical edge list.
    std::span<const NodePair> edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept;
    std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }

    // Copy with one more edge; a no-op copy if the edge already exists.
    Graph with_edge(NodeId a, NodeId b) const;

private:
    std::size_t node_count_;
    std::vector<NodePair> edges_;
    std::unordered_set<std::uint64_t> keys_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
};

// Flatness F(G) = |E| / C(n,2). Requires n >= 2.
double edge_density(const Graph& g);

// S(G) = 1 - F(G).
double segmentedness(const Graph& g);

// (n - 1) * F(G), the expected number of directly reachable neighbours of a
// uniformly chosen node. Equals the mean degree.
double expected_reachable_neighbors(const Graph& g);

}  // namespace segmeter
