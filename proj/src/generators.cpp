#include "segmeter/generators.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>

#include "segmeter/errors.hpp"
#include "segmeter/kernels.hpp"
#include "segmeter/sampling.hpp"

namespace segmeter {
namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(std::string(name) + " must lie in [0,1], got " + std::to_string(p));
}

}  // namespace

void validate(const ERConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("ER model needs n >= 2");
    if (cfg.n > std::size_t{0xffffffffULL}) throw ConfigError("n exceeds 32-bit node ids");
    check_probability(cfg.p, "p");
}

void validate(const SBMConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("SBM needs n >= 2");
    if (cfg.n > std::size_t{0xffffffffULL}) throw ConfigError("n exceeds 32-bit node ids");
    if (cfg.blocks < 1) throw ConfigError("SBM needs K >= 1");
    if (cfg.n % cfg.blocks != 0)
        throw ConfigError("K=" + std::to_string(cfg.blocks) + " does not divide n=" + std::to_string(cfg.n));
    check_probability(cfg.p_in, "p_in");
    check_probability(cfg.p_out, "p_out");
}

double sbm_global_density(const SBMConfig& cfg) {
    const double k = static_cast<double>(cfg.blocks);
    return cfg.p_in / k + (k - 1.0) / k * cfg.p_out;
}

double sbm_expected_density(const SBMConfig& cfg) {
    validate(cfg);
    const double n = static_cast<double>(cfg.n);
    const double size = n / static_cast<double>(cfg.blocks);
    const double within = (size - 1.0) / (n - 1.0);
    return within * cfg.p_in + (1.0 - within) * cfg.p_out;
}

double solve_p_in(double target_density, std::size_t blocks, double p_out) {
    if (blocks < 1) throw ConfigError("K must be >= 1");
    check_probability(p_out, "p_out");
    const double k = static_cast<double>(blocks);
    const double p_in = k * (target_density - (k - 1.0) / k * p_out);
    // Tolerate rounding right at the ends of the feasible range.
    constexpr double slack = 1e-12;
    if (!(p_in >= -slack && p_in <= 1.0 + slack))
        throw InfeasibleError("target density " + std::to_string(target_density) + " needs p_in=" +
                              std::to_string(p_in) + " outside [0,1] (K=" + std::to_string(blocks) +
                              ", p_out=" + std::to_string(p_out) + ")");
    return std::clamp(p_in, 0.0, 1.0);
}

PairOracle::Threshold PairOracle::threshold_for(double p) noexcept {
    if (p >= 1.0) return {0, true};
    if (p <= 0.0) return {0, false};
    return {static_cast<std::uint64_t>(std::ldexp(p, 64)), false};
}

PairOracle PairOracle::erdos_renyi(const ERConfig& cfg) {
    validate(cfg);
    PairOracle o;
    o.n_ = cfg.n;
    o.blocks_ = 1;
    o.key_ = kernels::mix64(cfg.seed + kernels::kGolden);
    o.within_ = o.between_ = threshold_for(cfg.p);
    return o;
}

PairOracle PairOracle::block_model(const SBMConfig& cfg) {
    validate(cfg);
    PairOracle o;
    o.n_ = cfg.n;
    o.blocks_ = cfg.blocks;
    o.key_ = kernels::mix64(cfg.seed + kernels::kGolden);
    o.within_ = threshold_for(cfg.p_in);
    o.between_ = threshold_for(cfg.p_out);
    return o;
}

const PairOracle::Threshold& PairOracle::threshold(NodePair p) const noexcept {
    return block_of(p.u) == block_of(p.v) ? within_ : between_;
}

bool PairOracle::operator()(NodeId a, NodeId b) const {
    const NodePair p = make_pair(a, b);
    if (p.v >= n_) throw DomainError("pair outside oracle node range");
    return passes(threshold(p), kernels::keyed_hash(key_, pack(p)));
}

void PairOracle::evaluate(std::span<const NodePair> pairs, std::span<std::uint8_t> out) const {
    std::vector<std::uint64_t> words(pairs.size());
    std::vector<std::uint64_t> hashes(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) words[i] = pack(pairs[i]);
    kernels::hash_words(key_, words, hashes);
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = passes(threshold(pairs[i]), hashes[i]) ? 1 : 0;
}

std::size_t PairOracle::count_edges(std::span<const NodePair> pairs) const {
    std::vector<std::uint64_t> words(pairs.size());
    std::vector<std::uint64_t> hashes(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) words[i] = pack(pairs[i]);
    kernels::hash_words(key_, words, hashes);
    if (blocks_ == 1) {
        if (within_.always) return pairs.size();
        return kernels::count_below(hashes, within_.value);
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) count += passes(threshold(pairs[i]), hashes[i]) ? 1 : 0;
    return count;
}

PairOracle er_oracle(const ERConfig& cfg) { return PairOracle::erdos_renyi(cfg); }
PairOracle sbm_oracle(const SBMConfig& cfg) { return PairOracle::block_model(cfg); }

Graph materialize(const PairOracle& oracle, std::size_t n, bool allow_large) {
    if (n > oracle.node_count())
        throw DomainError("cannot materialize " + std::to_string(n) + " nodes from an oracle over " +
                          std::to_string(oracle.node_count()));
    if (n > kMaterializeLimit && !allow_large)
        throw DomainError("refusing to materialize n=" + std::to_string(n) + " (> " +
                          std::to_string(kMaterializeLimit) + "); pass the override to force it");
    std::vector<NodePair> edges;
    std::vector<NodePair> row;
    std::vector<std::uint8_t> hits;
    for (NodeId u = 0; u + 1 < n; ++u) {
        row.clear();
        for (NodeId v = u + 1; v < n; ++v) row.push_back({u, v});
        hits.resize(row.size());
        oracle.evaluate(row, hits);
        for (std::size_t i = 0; i < row.size(); ++i)
            if (hits[i]) edges.push_back(row[i]);
    }
    return Graph(n, edges);
}

Graph materialize(const PairOracle& oracle, bool allow_large) {
    return materialize(oracle, oracle.node_count(), allow_large);
}

Graph random_graph_with_edges(std::size_t n, std::uint64_t edges, std::uint64_t seed) {
    if (n < 2) return Graph::empty(n);
    if (edges == 0) return Graph::empty(n);
    const auto pairs = sample_pairs({n, static_cast<std::size_t>(edges), SampleMode::without_replacement, seed});
    return Graph(n, pairs);
}

ModelConfigFile parse_model_config(std::istream& in) {
    ModelConfigFile cfg;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = raw.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            std::size_t used = 0;
            if (key == "n") cfg.n = std::stoull(value, &used);
            else if (key == "K") cfg.blocks = std::stoull(value, &used);
            else if (key == "p") cfg.p = std::stod(value, &used);
            else if (key == "p_in") cfg.p_in = std::stod(value, &used);
            else if (key == "p_out") cfg.p_out = std::stod(value, &used);
            else if (key == "seed") cfg.seed = std::stoull(value, &used);
            else throw ParseError("unknown key '" + key + "'", line_no);
            if (used != value.size()) throw ParseError("bad value '" + value + "' for " + key, line_no);
        } catch (const std::logic_error&) {
            throw ParseError("bad value '" + value + "' for " + key, line_no);
        }
    }
    return cfg;
}

}  // namespace segmeter
