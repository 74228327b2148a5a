#include "segmeter/measures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "segmeter/errors.hpp"

namespace segmeter {

Partition::Partition(std::vector<std::size_t> assignment) : assignment_(std::move(assignment)) {
    std::unordered_map<std::size_t, std::size_t> relabel;
    for (auto& c : assignment_) {
        auto [it, inserted] = relabel.try_emplace(c, relabel.size());
        c = it->second;
    }
    communities_ = relabel.size();
}

double modularity(const Graph& g, const Partition& part) {
    if (g.edge_count() == 0) throw DomainError("modularity is undefined for a graph without edges");
    if (part.node_count() != g.node_count())
        throw DomainError("partition covers " + std::to_string(part.node_count()) + " nodes, graph has " +
                          std::to_string(g.node_count()));
    const std::size_t c = part.community_count();
    std::vector<std::int64_t> internal(c, 0), degree(c, 0);
    for (const auto& e : g.edges())
        if (part.community_of(e.u) == part.community_of(e.v)) ++internal[part.community_of(e.u)];
    for (NodeId u = 0; u < g.node_count(); ++u)
        degree[part.community_of(u)] += static_cast<std::int64_t>(g.degree(u));

    // Q * 4m^2 = sum_c (4m e_c - d_c^2), exact in integers.
    const __int128 m = static_cast<__int128>(g.edge_count());
    __int128 numerator = 0;
    for (std::size_t i = 0; i < c; ++i)
        numerator += 4 * m * internal[i] - static_cast<__int128>(degree[i]) * degree[i];
    return static_cast<double>(static_cast<long double>(numerator) / static_cast<long double>(4 * m * m));
}

double fiedler_dense(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    if (n < 2) throw DomainError("Fiedler value needs at least 2 nodes");
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (NodeId u = 0; u < g.node_count(); ++u) lap(u, u) = static_cast<double>(g.degree(u));
    for (const auto& e : g.edges()) {
        lap(e.u, e.v) = -1.0;
        lap(e.v, e.u) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("dense Laplacian eigensolve failed");
    return solver.eigenvalues()(1);
}

FiedlerResult fiedler_value(const Graph& g, bool allow_large) {
    if (g.node_count() < 2) throw DomainError("Fiedler value needs at least 2 nodes");
    if (g.node_count() > kFiedlerLimit && !allow_large)
        throw DomainError("refusing Fiedler computation for n=" + std::to_string(g.node_count()) + " (> " +
                          std::to_string(kFiedlerLimit) + "); pass the override to force it");
    FiedlerResult r;
    if (g.node_count() <= kDenseEigenLimit) {
        r.value = fiedler_dense(g);
        r.method = EigenMethod::dense;
    } else {
        r.value = fiedler_lanczos(g);
        r.method = EigenMethod::lanczos;
    }
    if (std::abs(r.value) < kZeroEigenTolerance) {
        r.value = 0.0;
        r.disconnected = true;
    }
    return r;
}

double abs_pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DomainError("correlation inputs differ in length");
    if (xs.size() < 2) throw DomainError("correlation needs at least 2 points");
    auto constant = [](std::span<const double> v) {
        for (double x : v)
            if (x != v[0]) return false;
        return true;
    };
    if (constant(xs) || constant(ys)) throw DomainError("correlation undefined: zero variance");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("correlation undefined: zero variance");
    return std::min(1.0, std::abs(sxy / std::sqrt(sxx * syy)));
}

MeasureCollection measure_collection(std::span<const NamedGraph> graphs, bool allow_large) {
    MeasureCollection out;
    for (const auto& [id, g] : graphs) {
        try {
            MeasureRow row;
            row.id = id;
            row.nodes = g.node_count();
            row.edges = g.edge_count();
            row.flatness = edge_density(g);
            const auto part = detect_communities(g);
            row.modularity = modularity(g, part);
            row.communities = part.community_count();
            row.fiedler = fiedler_value(g, allow_large);
            out.rows.push_back(std::move(row));
        } catch (const Error& e) {
            out.failures.push_back({id, e.what()});
        }
    }
    if (out.rows.size() < 2) {
        out.correlation_error = "correlations need at least 2 measured graphs";
        return out;
    }
    std::vector<double> f, q, l;
    for (const auto& r : out.rows) {
        f.push_back(r.flatness);
        q.push_back(r.modularity);
        l.push_back(r.fiedler.value);
    }
    std::string errors;
    try {
        out.corr_flatness_modularity = abs_pearson(f, q);
    } catch (const DomainError& e) {
        errors += std::string("flatness/modularity: ") + e.what();
    }
    try {
        out.corr_flatness_fiedler = abs_pearson(f, l);
    } catch (const DomainError& e) {
        if (!errors.empty()) errors += "; ";
        errors += std::string("flatness/fiedler: ") + e.what();
    }
    out.correlation_error = errors;
    return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw ParseError("cannot open manifest " + manifest.string(), 0);
    const auto base = manifest.parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string id, path, extra;
        if (!(ss >> id) || id.front() == '#') continue;
        if (!(ss >> path) || (ss >> extra))
            throw ParseError(manifest.string() + ": expected 'id path'", line_no);
        std::filesystem::path p(path);
        entries.push_back({id, p.is_absolute() ? p : base / p});
    }
    if (entries.empty()) throw ParseError(manifest.string() + ": manifest lists no graphs", 0);
    return entries;
}

}  // namespace segmeter
