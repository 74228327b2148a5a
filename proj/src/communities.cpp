#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "segmeter/errors.hpp"
#include "segmeter/measures.hpp"

namespace segmeter {
namespace {

// Gain of merging communities i and j, scaled by 2m^2 so it stays an
// integer: 2m * w_ij - d_i * d_j.
struct Candidate {
    std::int64_t gain = 0;
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    bool valid = false;
};

bool better(const Candidate& x, const Candidate& y) {
    if (!x.valid) return false;
    if (!y.valid) return true;
    if (x.gain != y.gain) return x.gain > y.gain;
    return x.a != y.a ? x.a < y.a : x.b < y.b;
}

class Agglomerator {
public:
    explicit Agglomerator(const Graph& g)
        : two_m_(2 * static_cast<std::int64_t>(g.edge_count())),
          links_(g.node_count()),
          degree_(g.node_count()),
          alive_(g.node_count(), true),
          best_(g.node_count()) {
        for (NodeId u = 0; u < g.node_count(); ++u) degree_[u] = static_cast<std::int64_t>(g.degree(u));
        for (const auto& e : g.edges()) {
            ++links_[e.u][e.v];
            ++links_[e.v][e.u];
        }
        for (std::size_t i = 0; i < links_.size(); ++i) refresh(i);
    }

    Candidate best() const {
        Candidate top;
        for (std::size_t i = 0; i < best_.size(); ++i)
            if (alive_[i] && better(best_[i], top)) top = best_[i];
        return top;
    }

    // Merges c.b into c.a.
    void merge(const Candidate& c) {
        const std::size_t keep = c.a, gone = c.b;
        auto moved = std::move(links_[gone]);
        links_[gone].clear();
        moved.erase(keep);
        links_[keep].erase(gone);
        for (const auto& [k, w] : moved) {
            links_[keep][k] += w;
            links_[k].erase(gone);
            links_[k][keep] += w;
        }
        degree_[keep] += degree_[gone];
        alive_[gone] = false;
        best_[gone] = {};

        refresh(keep);
        for (const auto& [k, w] : links_[keep]) {
            const Candidate& old = best_[k];
            if (old.valid && (old.a == keep || old.b == keep || old.a == gone || old.b == gone)) {
                refresh(k);
            } else {
                const Candidate fresh = candidate(k, keep, w);
                if (better(fresh, old)) best_[k] = fresh;
            }
        }
    }

private:
    Candidate candidate(std::size_t i, std::size_t j, std::int64_t w) const {
        Candidate c;
        c.gain = two_m_ * w - degree_[i] * degree_[j];
        c.a = std::min(i, j);
        c.b = std::max(i, j);
        c.valid = true;
        return c;
    }

    void refresh(std::size_t i) {
        Candidate top;
        for (const auto& [j, w] : links_[i]) {
            const Candidate c = candidate(i, j, w);
            if (better(c, top)) top = c;
        }
        best_[i] = top;
    }

    std::int64_t two_m_;
    std::vector<std::unordered_map<std::size_t, std::int64_t>> links_;
    std::vector<std::int64_t> degree_;
    std::vector<bool> alive_;
    std::vector<Candidate> best_;
};

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

Partition detect_communities(const Graph& g) {
    if (g.edge_count() == 0) throw DomainError("community detection needs at least one edge");
    const std::size_t n = g.node_count();

    // Q * 4m^2 for the current partition; singletons have e_c = 0.
    __int128 score = 0;
    for (NodeId u = 0; u < n; ++u) score -= static_cast<__int128>(g.degree(u)) * g.degree(u);
    __int128 best_score = score;
    std::size_t best_step = 0;

    Agglomerator agg(g);
    std::vector<Candidate> merges;
    for (Candidate c = agg.best(); c.valid; c = agg.best()) {
        agg.merge(c);
        merges.push_back(c);
        score += 2 * static_cast<__int128>(c.gain);
        if (score > best_score) {
            best_score = score;
            best_step = merges.size();
        }
    }

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t s = 0; s < best_step; ++s) parent[find(parent, merges[s].b)] = find(parent, merges[s].a);
    std::vector<std::size_t> assignment(n);
    for (std::size_t u = 0; u < n; ++u) assignment[u] = find(parent, u);
    return Partition(std::move(assignment));
}

}  // namespace segmeter
