#include "segmeter/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "segmeter/errors.hpp"
#include "segmeter/estimator.hpp"
#include "segmeter/generators.hpp"

namespace segmeter {

std::string_view to_string(ModelKind m) noexcept {
    switch (m) {
        case ModelKind::er: return "er";
        case ModelKind::sbm: return "sbm";
        case ModelKind::graph_file: return "graph";
    }
    return "?";
}

std::string_view to_string(DensityBasis b) noexcept {
    return b == DensityBasis::asymptotic ? "asymptotic" : "finite";
}

namespace {

struct TrialResult {
    double estimate = 0.0;
    double low = 0.0;
    double high = 0.0;
    bool covered = false;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so the caller's reduction never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        });
}

// `count_edges(pairs)` returns how many sampled pairs are connected.
template <class CountFn>
TrialRow aggregate_trials(std::string model, double truth, std::size_t n, std::size_t samples,
                          std::size_t trials, double level, SampleMode mode, std::uint64_t master_seed,
                          std::uint64_t stream, std::size_t threads, CountFn&& count_edges) {
    if (trials == 0) throw ConfigError("trials must be >= 1");
    if (samples == 0) throw ConfigError("M must be >= 1");
    std::vector<TrialResult> results(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const auto pairs = sample_pairs({n, samples, mode, derive_seed(master_seed, stream, t)});
        const std::size_t k = count_edges(std::span<const NodePair>(pairs));
        const double est = static_cast<double>(k) / static_cast<double>(samples);
        const auto iv = wald_interval(est, samples, level);
        results[t] = {est, iv.low, iv.high, iv.contains(truth)};
    });

    double sum = 0.0, low_sum = 0.0, high_sum = 0.0;
    std::size_t covered = 0;
    for (const auto& r : results) {
        sum += r.estimate;
        low_sum += r.low;
        high_sum += r.high;
        covered += r.covered ? 1 : 0;
    }
    const double tcount = static_cast<double>(trials);
    const double mean = sum / tcount;
    double ss = 0.0;
    for (const auto& r : results) ss += (r.estimate - mean) * (r.estimate - mean);
    const double sd = trials > 1 ? std::sqrt(ss / (tcount - 1.0)) : 0.0;
    const double half = critical_value(level) * sd / std::sqrt(tcount);

    TrialRow row;
    row.model = std::move(model);
    row.true_density = truth;
    row.mean_estimate = mean;
    row.est_sd = sd;
    row.ci_mean_low = mean - half;
    row.ci_mean_high = mean + half;
    row.wald_low_mean = low_sum / tcount;
    row.wald_high_mean = high_sum / tcount;
    row.coverage = static_cast<double>(covered) / tcount;
    row.trials = trials;
    row.samples = samples;
    row.seed = master_seed;
    return row;
}

void check_common(const SweepSpec& spec) {
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");
    if (spec.samples < 1) throw ConfigError("M must be >= 1");
    if (!(spec.level > 0.0 && spec.level < 1.0)) throw ConfigError("level must lie in (0,1)");
    if (spec.density_grid.empty()) throw ConfigError("density grid is empty");
    for (double d : spec.density_grid)
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("grid value " + std::to_string(d) + " outside (0,1)");
    if (spec.n < 2) throw ConfigError("n must be >= 2");
    if (spec.mode == SampleMode::without_replacement && spec.samples > max_possible_edges(spec.n))
        throw ConfigError("M exceeds the number of distinct pairs");
}

}  // namespace

SweepResult run_er_sweep(const SweepSpec& spec) {
    if (spec.model != ModelKind::er) throw ConfigError("run_er_sweep needs model=er");
    check_common(spec);
    SweepResult out;
    for (std::size_t gi = 0; gi < spec.density_grid.size(); ++gi) {
        const double p = spec.density_grid[gi];
        const auto oracle = er_oracle({spec.n, p, derive_seed(spec.master_seed, gi, ~std::uint64_t{0})});
        out.rows.push_back(aggregate_trials(
            "er", p, spec.n, spec.samples, spec.trials, spec.level, spec.mode, spec.master_seed, gi,
            spec.threads, [&](std::span<const NodePair> pairs) { return oracle.count_edges(pairs); }));
    }
    return out;
}

SweepResult run_sbm_sweep(const SweepSpec& spec) {
    if (spec.model != ModelKind::sbm) throw ConfigError("run_sbm_sweep needs model=sbm");
    check_common(spec);
    if (spec.blocks < 1 || spec.n % spec.blocks != 0)
        throw ConfigError("K=" + std::to_string(spec.blocks) + " must divide n=" + std::to_string(spec.n));
    SweepResult out;
    for (std::size_t gi = 0; gi < spec.density_grid.size(); ++gi) {
        const double target = spec.density_grid[gi];
        double p_in = 0.0;
        try {
            p_in = solve_p_in(target, spec.blocks, spec.p_out);
        } catch (const InfeasibleError& e) {
            out.failures.push_back({target, e.what()});
            continue;
        }
        const SBMConfig cfg{spec.n, spec.blocks, p_in, spec.p_out,
                            derive_seed(spec.master_seed, gi, ~std::uint64_t{0})};
        const auto oracle = sbm_oracle(cfg);
        const double truth = spec.basis == DensityBasis::asymptotic ? target : sbm_expected_density(cfg);
        auto row = aggregate_trials(
            "sbm", truth, spec.n, spec.samples, spec.trials, spec.level, spec.mode, spec.master_seed, gi,
            spec.threads, [&](std::span<const NodePair> pairs) { return oracle.count_edges(pairs); });
        row.p_in = p_in;
        out.rows.push_back(std::move(row));
    }
    return out;
}

TrialRow run_graph_trials(const Graph& g, std::size_t samples, std::size_t trials, double level,
                          std::uint64_t master_seed, SampleMode mode, std::size_t threads) {
    const double truth = edge_density(g);
    if (mode == SampleMode::without_replacement && samples > max_possible_edges(g.node_count()))
        throw ConfigError("M exceeds the number of distinct pairs");
    return aggregate_trials("graph", truth, g.node_count(), samples, trials, level, mode, master_seed, 0,
                            threads, [&](std::span<const NodePair> pairs) {
                                std::size_t k = 0;
                                for (const auto& p : pairs) k += g.has_edge(p.u, p.v) ? 1 : 0;
                                return k;
                            });
}

namespace {
constexpr std::string_view kCsvHeader =
    "model,true_density,M,trials,mean_estimate,est_sd,ci_mean_low,ci_mean_high,wald_low_mean,"
    "wald_high_mean,coverage,seed,p_in";
}

void write_results_csv(std::span<const TrialRow> rows, std::ostream& out) {
    if (rows.empty()) throw ConfigError("no result rows to write");
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << fmt::format("{},{:.6f},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{},{}\n", r.model,
                           r.true_density, r.samples, r.trials, r.mean_estimate, r.est_sd, r.ci_mean_low,
                           r.ci_mean_high, r.wald_low_mean, r.wald_high_mean, r.coverage, r.seed,
                           r.p_in ? fmt::format("{:.6f}", *r.p_in) : std::string{});
    }
}

void write_results_csv(std::span<const TrialRow> rows, const std::filesystem::path& destination) {
    std::ostringstream buffer;
    write_results_csv(rows, buffer);
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + destination.string() + " for writing");
    out << buffer.str();
    out.flush();
    if (!out) throw Error("write failed for " + destination.string());
}

std::vector<TrialRow> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("missing or unexpected CSV header", 1);
    std::vector<TrialRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 13) throw ParseError("expected 13 CSV fields, found " + std::to_string(f.size()), line_no);
        try {
            TrialRow r;
            r.model = f[0];
            r.true_density = std::stod(f[1]);
            r.samples = std::stoull(f[2]);
            r.trials = std::stoull(f[3]);
            r.mean_estimate = std::stod(f[4]);
            r.est_sd = std::stod(f[5]);
            r.ci_mean_low = std::stod(f[6]);
            r.ci_mean_high = std::stod(f[7]);
            r.wald_low_mean = std::stod(f[8]);
            r.wald_high_mean = std::stod(f[9]);
            r.coverage = std::stod(f[10]);
            r.seed = std::stoull(f[11]);
            if (!f[12].empty()) r.p_in = std::stod(f[12]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError("bad numeric field", line_no);
        }
    }
    return rows;
}

std::vector<double> parse_grid(std::string_view text) {
    const std::string s(text);
    std::vector<double> grid;
    try {
        if (s.find(':') != std::string::npos) {
            std::vector<double> parts;
            std::stringstream ss(s);
            for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(std::stod(tok));
            if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
                throw ConfigError("grid range must be start:stop:step with step > 0");
            const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
            for (std::size_t i = 0; i <= steps; ++i) {
                // Round to 12 decimals so 0.1 + 2 * 0.1 prints and compares as 0.3.
                const double v = parts[0] + static_cast<double>(i) * parts[2];
                grid.push_back(std::round(v * 1e12) / 1e12);
            }
        } else {
            std::stringstream ss(s);
            for (std::string tok; std::getline(ss, tok, ',');) grid.push_back(std::stod(tok));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse density grid '" + s + "'");
    }
    if (grid.empty()) throw ConfigError("density grid is empty");
    return grid;
}

}  // namespace segmeter
