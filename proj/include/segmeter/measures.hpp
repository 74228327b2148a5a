#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segmeter/graph.hpp"

namespace segmeter {

// Community assignment with dense ids 0..C-1.
class Partition {
public:
    // Relabels ids densely in order of first appearance.
    explicit Partition(std::vector<std::size_t> assignment);

    static Partition single(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t community_count() const noexcept { return communities_; }
    std::size_t community_of(NodeId u) const noexcept { return assignment_[u]; }
    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::size_t> assignment_;
    std::size_t communities_ = 0;
};

// Newman-Girvan Q = sum_c [ e_c/m - (d_c/2m)^2 ]. Throws DomainError for an
// edgeless graph or a partition of the wrong size.
double modularity(const Graph& g, const Partition& part);

// Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
// Merges the adjacent pair with the largest gain, ties going to the
// lexicographically smallest (i, j); returns the best partition seen.
// Gains are tracked in exact integer arithmetic, so the result is fully
// deterministic.
Partition detect_communities(const Graph& g);

enum class EigenMethod { dense, lanczos };

struct FiedlerResult {
    double value = 0.0;  // second-smallest Laplacian eigenvalue
    bool disconnected = false;
    EigenMethod method = EigenMethod::dense;
};

inline constexpr std::size_t kDenseEigenLimit = 1500;
inline constexpr std::size_t kFiedlerLimit = 5000;
inline constexpr double kZeroEigenTolerance = 1e-9;

// lambda_2 of L = D - A. Dense solve up to kDenseEigenLimit nodes, Lanczos
// above. Values with |lambda_2| < 1e-9 are reported as exactly 0 and
// flagged disconnected. Refuses n > kFiedlerLimit unless allow_large.
FiedlerResult fiedler_value(const Graph& g, bool allow_large = false);

// Raw solvers (no zero snapping), exposed for cross-checking.
double fiedler_dense(const Graph& g);
double fiedler_lanczos(const Graph& g, double tolerance = 1e-10);

// |Pearson r|. Throws DomainError on length mismatch, fewer than 2 points,
// or zero variance.
double abs_pearson(std::span<const double> xs, std::span<const double> ys);

struct MeasureRow {
    std::string id;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double flatness = 0.0;
    double modularity = 0.0;
    std::size_t communities = 0;
    FiedlerResult fiedler;
};

struct MeasureFailure {
    std::string id;
    std::string reason;
};

struct MeasureCollection {
    std::vector<MeasureRow> rows;
    std::vector<MeasureFailure> failures;
    // Empty with `correlation_error` set when undefined.
    std::optional<double> corr_flatness_modularity;
    std::optional<double> corr_flatness_fiedler;
    std::string correlation_error;
};

struct NamedGraph {
    std::string id;
    Graph graph;
};

// Failures isolate to their row; correlations use the successful rows.
MeasureCollection measure_collection(std::span<const NamedGraph> graphs, bool allow_large = false);

struct ManifestEntry {
    std::string id;
    std::filesystem::path path;
};

// `id path` per line, '#' comments; relative paths resolve against the
// manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

}  // namespace segmeter
