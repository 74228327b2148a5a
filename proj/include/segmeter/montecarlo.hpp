#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segmeter/graph.hpp"
#include "segmeter/sampling.hpp"

namespace segmeter {

enum class ModelKind { er, sbm, graph_file };
// Which "true" density SBM rows are scored against.
enum class DensityBasis { asymptotic, finite };

std::string_view to_string(ModelKind m) noexcept;
std::string_view to_string(DensityBasis b) noexcept;

struct SweepSpec {
    ModelKind model = ModelKind::er;
    std::vector<double> density_grid;
    std::size_t samples = 97;  // M
    std::size_t trials = 1000;
    double level = 0.95;
    std::size_t n = 100000;
    // SBM only.
    std::size_t blocks = 5;
    double p_out = 0.1;
    DensityBasis basis = DensityBasis::asymptotic;
    SampleMode mode = SampleMode::with_replacement;
    std::uint64_t master_seed = 0;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

// Aggregate over `trials` Monte Carlo trials at one grid point.
struct TrialRow {
    std::string model;
    double true_density = 0.0;
    double mean_estimate = 0.0;
    double est_sd = 0.0;
    // Monte Carlo mean +/- z * sd / sqrt(T).
    double ci_mean_low = 0.0;
    double ci_mean_high = 0.0;
    // Average per-trial Wald endpoints.
    double wald_low_mean = 0.0;
    double wald_high_mean = 0.0;
    double coverage = 0.0;  // covering trials / T
    std::size_t trials = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::optional<double> p_in;
};

struct RowFailure {
    double target_density = 0.0;
    std::string reason;
};

struct SweepResult {
    std::vector<TrialRow> rows;
    std::vector<RowFailure> failures;
};

// Each trial draws M uniform pairs and asks an oracle over n nodes; nothing
// is materialized. Throws ConfigError on an invalid spec before any trial.
SweepResult run_er_sweep(const SweepSpec& spec);

// Solves p_in per target density. Infeasible targets become RowFailures and
// the sweep continues.
SweepResult run_sbm_sweep(const SweepSpec& spec);

// Trials against a concrete graph; truth is edge_density(g). Trial t uses
// seed derive_seed(master_seed, 0, t).
TrialRow run_graph_trials(const Graph& g, std::size_t samples, std::size_t trials, double level,
                          std::uint64_t master_seed, SampleMode mode = SampleMode::with_replacement,
                          std::size_t threads = 0);

// Header plus one line per row. Densities and sd at 6 decimals, coverage 4.
void write_results_csv(std::span<const TrialRow> rows, std::ostream& out);
void write_results_csv(std::span<const TrialRow> rows, const std::filesystem::path& destination);
std::vector<TrialRow> read_results_csv(std::istream& in);

// "0.1:0.5:0.1" (inclusive range) or "0.1,0.2,0.3".
std::vector<double> parse_grid(std::string_view text);

}  // namespace segmeter
