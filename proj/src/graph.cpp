#include "segmeter/graph.hpp"

#include <algorithm>
#include <string>

#include "segmeter/errors.hpp"

namespace segmeter {

NodePair make_pair(NodeId a, NodeId b) {
    if (a == b) throw DomainError("self-loop pair {" + std::to_string(a) + "," + std::to_string(a) + "}");
    return a < b ? NodePair{a, b} : NodePair{b, a};
}

std::uint64_t max_possible_edges(std::uint64_t n) {
    if (n == 0) throw DomainError("max_possible_edges: graph must have at least one node");
    // One of n, n-1 is even, so halve it first to stay exact.
    return n % 2 == 0 ? (n / 2) * (n - 1) : n * ((n - 1) / 2);
}

Graph::Graph(std::size_t node_count, std::span<const NodePair> edges) : node_count_(node_count) {
    if (node_count_ > std::size_t{0xffffffffULL})
        throw DomainError("graph too large: node ids are 32-bit");
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u >= node_count_ || e.v >= node_count_)
            throw DomainError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              "} outside node range [0," + std::to_string(node_count_) + ")");
        edges_.push_back(make_pair(e.u, e.v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    keys_.reserve(edges_.size());
    std::vector<std::size_t> deg(node_count_, 0);
    for (const auto& e : edges_) {
        keys_.insert(pack(e));
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(node_count_ + 1, 0);
    for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[cursor[e.u]++] = e.v;
        adjacency_[cursor[e.v]++] = e.u;
    }
}

Graph Graph::empty(std::size_t n) { return Graph(n, {}); }

Graph Graph::complete(std::size_t n) {
    std::vector<NodePair> edges;
    edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, edges);
}

bool Graph::has_edge(NodeId a, NodeId b) const noexcept {
    if (a == b) return false;
    return keys_.contains(pack(a < b ? NodePair{a, b} : NodePair{b, a}));
}

std::span<const NodeId> Graph::neighbors(NodeId u) const noexcept {
    return std::span<const NodeId>(adjacency_).subspan(offsets_[u], offsets_[u + 1] - offsets_[u]);
}

Graph Graph::with_edge(NodeId a, NodeId b) const {
    std::vector<NodePair> edges(edges_);
    edges.push_back(make_pair(a, b));
    return Graph(node_count_, edges);
}

double edge_density(const Graph& g) {
    if (g.node_count() < 2) throw DomainError("edge density is undefined for fewer than 2 nodes");
    return static_cast<double>(g.edge_count()) / static_cast<double>(max_possible_edges(g.node_count()));
}

double segmentedness(const Graph& g) { return 1.0 - edge_density(g); }

double expected_reachable_neighbors(const Graph& g) {
    return static_cast<double>(g.node_count() - 1) * edge_density(g);
}

}  // namespace segmeter
