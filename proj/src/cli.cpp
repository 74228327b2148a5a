#include "segmeter/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "segmeter/bayes.hpp"
#include "segmeter/edge_list.hpp"
#include "segmeter/errors.hpp"
#include "segmeter/estimator.hpp"
#include "segmeter/generators.hpp"
#include "segmeter/graph.hpp"
#include "segmeter/measures.hpp"
#include "segmeter/montecarlo.hpp"
#include "segmeter/prober.hpp"
#include "segmeter/report.hpp"
#include "segmeter/sampling.hpp"

namespace segmeter {
namespace {

struct Common {
    std::uint64_t seed = 0;
    double level = 0.95;
    std::string out;
    bool deterministic = false;
};

void add_common(CLI::App* sub, Common& c, bool single_level = true) {
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    if (single_level) sub->add_option("--level", c.level, "Confidence level")->capture_default_str();
    sub->add_option("--out", c.out, "Write the machine-readable record here");
    sub->add_flag("--deterministic", c.deterministic, "Zero timestamps and latencies for byte-stable output");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + path);
    f << content;
    if (!f) throw ConfigError("write failed for " + path);
}

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError(fmt::format("level must lie in (0,1), got {}", level));
}

// ------------------------------------------------------------- samplesize

struct SampleSizeArgs {
    Common common;
    std::vector<double> levels;
    std::vector<double> epsilons;
    std::vector<std::uint64_t> ns;
};

int cmd_samplesize(const SampleSizeArgs& a, std::ostream& out) {
    auto levels = a.levels.empty() ? std::vector<double>{0.90, 0.95, 0.99} : a.levels;
    auto epsilons = a.epsilons.empty() ? std::vector<double>{0.1, 0.05} : a.epsilons;
    nlohmann::ordered_json record;
    auto& rows = record["sample_sizes"] = nlohmann::ordered_json::array();

    for (double eps : epsilons)
        for (double level : levels)
            rows.push_back({{"level", level},
                            {"epsilon", eps},
                            {"z", critical_value(level)},
                            {"M", required_sample_size(level, eps)}});
    out << fmt::format("{:<8} {:<8} {:>8} {:>8}\n", "level", "epsilon", "z", "M");
    for (const auto& r : rows)
        out << fmt::format("{:<8} {:<8} {:>8.4f} {:>8}\n", r["level"].get<double>(), r["epsilon"].get<double>(),
                           r["z"].get<double>(), r["M"].get<std::size_t>());
    if (!a.ns.empty()) {
        auto& edges = record["max_possible_edges"] = nlohmann::ordered_json::array();
        out << fmt::format("\n{:<14} {:>22}\n", "n", "max_possible_edges");
        for (auto n : a.ns) {
            const auto e = max_possible_edges(n);
            out << fmt::format("{:<14} {:>22}\n", n, e);
            edges.push_back({{"n", n}, {"max_possible_edges", e}});
        }
    }
    if (!a.common.out.empty()) write_file(a.common.out, record.dump(2) + "\n");
    return exit_ok;
}

// ---------------------------------------------------------- estimate-graph

struct EstimateGraphArgs {
    Common common;
    std::string graph;
    std::size_t samples = 97;
    std::size_t trials = 1000;
    std::string mode = "with-replacement";
    bool single = false;
    std::size_t threads = 0;
    double prior_alpha = kDefaultPrior.alpha;
    double prior_beta = kDefaultPrior.beta;
};

int cmd_estimate_graph(const EstimateGraphArgs& a, std::ostream& out) {
    check_level(a.common.level);
    const SampleMode mode = parse_sample_mode(a.mode);
    const LoadedGraph loaded = load_edge_list_file(a.graph);
    const Graph& g = loaded.graph;
    const double f = edge_density(g);

    out << fmt::format("graph            {}\n", a.graph);
    out << fmt::format("nodes            {}\n", g.node_count());
    out << fmt::format("edges            {}\n", g.edge_count());
    if (loaded.self_loops_dropped + loaded.duplicate_lines > 0)
        out << fmt::format("ignored lines    {} self-loops, {} duplicates\n", loaded.self_loops_dropped,
                           loaded.duplicate_lines);
    out << fmt::format("F(G)             {:.6f}\n", f);
    out << fmt::format("S(G)             {:.6f}\n", segmentedness(g));
    out << fmt::format("reachable nbrs   {:.4f}\n", expected_reachable_neighbors(g));

    if (a.single) {
        const PosteriorBeta prior{a.prior_alpha, a.prior_beta};
        const auto pairs = sample_pairs({g.node_count(), a.samples, mode, a.common.seed});
        std::vector<std::uint8_t> outcomes(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) outcomes[i] = g.has_edge(pairs[i].u, pairs[i].v) ? 1 : 0;
        EstimateReport r = estimate_with_policy(outcomes, a.common.level, prior);
        r.seed = a.common.seed;
        out << "\n" << to_text(r);
        if (!a.common.out.empty()) write_file(a.common.out, to_json_line(r) + "\n");
        return exit_ok;
    }

    TrialRow row = run_graph_trials(g, a.samples, a.trials, a.common.level, a.common.seed, mode, a.threads);
    out << fmt::format("\ntrials           {} x M={} ({}, seed {})\n", row.trials, row.samples, to_string(mode),
                       row.seed);
    out << fmt::format("mean F_hat       {:.6f}  (sd {:.6f})\n", row.mean_estimate, row.est_sd);
    out << fmt::format("95% CI of mean   [{:.6f}, {:.6f}]\n", row.ci_mean_low, row.ci_mean_high);
    out << fmt::format("mean Wald bounds [{:.6f}, {:.6f}]\n", row.wald_low_mean, row.wald_high_mean);
    out << fmt::format("coverage         {:.4f}\n", row.coverage);
    if (!a.common.out.empty()) {
        std::ostringstream csv;
        write_results_csv(std::span<const TrialRow>(&row, 1), csv);
        write_file(a.common.out, csv.str());
    }
    return exit_ok;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::string model = "er";
    std::string grid = "0.1:0.5:0.1";
    std::size_t samples = 97;
    std::size_t trials = 1000;
    std::size_t n = 100000;
    std::size_t blocks = 5;
    double p_out = 0.1;
    std::string density = "asymptotic";
    std::string mode = "with-replacement";
    std::string config;
    std::size_t threads = 0;
};

int cmd_simulate(SimulateArgs a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    if (a.model == "er") spec.model = ModelKind::er;
    else if (a.model == "sbm") spec.model = ModelKind::sbm;
    else throw ConfigError("--model must be er or sbm");
    if (a.density == "asymptotic") spec.basis = DensityBasis::asymptotic;
    else if (a.density == "finite") spec.basis = DensityBasis::finite;
    else throw ConfigError("--density must be asymptotic or finite");

    std::optional<std::vector<double>> config_grid;
    if (!a.config.empty()) {
        std::ifstream f(a.config);
        if (!f) throw ParseError("cannot open config " + a.config, 0);
        ModelConfigFile cfg;
        try {
            cfg = parse_model_config(f);
        } catch (const ParseError& e) {
            throw e.in_context(a.config);
        }
        // Explicit flags win over the file.
        if (cfg.n && sub.count("--n") == 0) a.n = *cfg.n;
        if (cfg.blocks && sub.count("--K") == 0) a.blocks = *cfg.blocks;
        if (cfg.p_out && sub.count("--p-out") == 0) a.p_out = *cfg.p_out;
        if (cfg.seed && sub.count("--seed") == 0) a.common.seed = *cfg.seed;
        if (spec.model == ModelKind::er && cfg.p) config_grid = std::vector<double>{*cfg.p};
        if (spec.model == ModelKind::sbm && cfg.p_in) {
            SBMConfig sbm{a.n, a.blocks, *cfg.p_in, a.p_out, 0};
            validate(sbm);
            config_grid = std::vector<double>{spec.basis == DensityBasis::finite ? sbm_expected_density(sbm)
                                                                                  : sbm_global_density(sbm)};
        }
    }
    spec.density_grid = (config_grid && sub.count("--grid") == 0) ? *config_grid : parse_grid(a.grid);
    spec.samples = a.samples;
    spec.trials = a.trials;
    spec.level = a.common.level;
    spec.n = a.n;
    spec.blocks = a.blocks;
    spec.p_out = a.p_out;
    spec.mode = parse_sample_mode(a.mode);
    spec.master_seed = a.common.seed;
    spec.threads = a.threads;

    const SweepResult result = spec.model == ModelKind::er ? run_er_sweep(spec) : run_sbm_sweep(spec);

    out << fmt::format("model {}  n={}  M={}  trials={}  level={}  seed={}\n", a.model, spec.n, spec.samples,
                       spec.trials, spec.level, spec.master_seed);
    if (spec.model == ModelKind::sbm)
        out << fmt::format("K={}  p_out={}  density basis {}\n", spec.blocks, spec.p_out, to_string(spec.basis));
    out << fmt::format("{:>9} {:>9} {:>11} {:>9} {:>9}\n", "density", "p_in", "mean F_hat", "sd", "coverage");
    for (const auto& r : result.rows) {
        out << fmt::format("{:>9.4f} {:>9} {:>11.6f} {:>9.6f} {:>9.4f}\n", r.true_density,
                           r.p_in ? fmt::format("{:.4f}", *r.p_in) : std::string("-"), r.mean_estimate, r.est_sd,
                           r.coverage);
    }
    for (const auto& f : result.failures)
        out << fmt::format("{:>9.4f} infeasible: {}\n", f.target_density, f.reason);
    if (result.rows.empty()) {
        err << "segmeter: every grid point was infeasible\n";
        return exit_usage;
    }
    const auto [lo, hi] = std::minmax_element(result.rows.begin(), result.rows.end(),
                                              [](const auto& x, const auto& y) { return x.coverage < y.coverage; });
    out << fmt::format("coverage min {:.4f}  max {:.4f}  ({} rows, {} infeasible)\n", lo->coverage, hi->coverage,
                       result.rows.size(), result.failures.size());
    if (!a.common.out.empty()) write_results_csv(result.rows, std::filesystem::path(a.common.out));
    return exit_ok;
}

// ---------------------------------------------------------------- measures

struct MeasuresArgs {
    Common common;
    std::string manifest;
    bool allow_large = false;
};

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : std::string("NA"); }

int cmd_measures(const MeasuresArgs& a, std::ostream& out, std::ostream& err) {
    const auto entries = read_manifest(a.manifest);
    std::vector<NamedGraph> graphs;
    std::vector<MeasureFailure> load_failures;
    for (const auto& e : entries) {
        try {
            graphs.push_back({e.id, load_edge_list_file(e.path).graph});
        } catch (const ParseError& ex) {
            load_failures.push_back({e.id, ex.what()});
        }
    }
    MeasureCollection c = measure_collection(graphs, a.allow_large);
    c.failures.insert(c.failures.begin(), load_failures.begin(), load_failures.end());

    std::ostringstream csv;
    csv << "id,nodes,edges,flatness,modularity,communities,fiedler,disconnected,eigen_method\n";
    out << fmt::format("{:<16} {:>8} {:>10} {:>10} {:>10} {:>6} {:>14}\n", "id", "nodes", "edges", "flatness",
                       "modularity", "comms", "fiedler");
    for (const auto& r : c.rows) {
        const char* method = r.fiedler.method == EigenMethod::dense ? "dense" : "lanczos";
        csv << fmt::format("{},{},{},{:.6f},{:.6f},{},{:.10g},{},{}\n", r.id, r.nodes, r.edges, r.flatness,
                           r.modularity, r.communities, r.fiedler.value, r.fiedler.disconnected ? 1 : 0, method);
        out << fmt::format("{:<16} {:>8} {:>10} {:>10.6f} {:>10.6f} {:>6} {:>14.6g}{}\n", r.id, r.nodes, r.edges,
                           r.flatness, r.modularity, r.communities, r.fiedler.value,
                           r.fiedler.disconnected ? " (disconnected)" : "");
    }
    for (const auto& f : c.failures) out << fmt::format("{:<16} skipped: {}\n", f.id, f.reason);
    out << fmt::format("|corr(F, Q)|       {}\n", fmt_opt(c.corr_flatness_modularity));
    out << fmt::format("|corr(F, fiedler)| {}\n", fmt_opt(c.corr_flatness_fiedler));
    if (!a.common.out.empty()) write_file(a.common.out, csv.str());
    if (!c.correlation_error.empty()) {
        err << "segmeter: " << c.correlation_error << "\n";
        return exit_numerical;
    }
    return exit_ok;
}

// ------------------------------------------------------------------- probe

struct ProbeArgs {
    Common common;
    std::string backend = "simulated";
    std::string graph;
    std::string inventory;
    std::size_t samples = 97;
    std::vector<std::uint16_t> tcp_ports;
    std::vector<std::uint16_t> udp_ports;
    bool icmp = false;
    long timeout_ms = 1000;
    std::string suite_config;
    std::string exec_template;
    bool exec_concurrent = false;
    bool refused_reachable = false;
    std::size_t parallel = 8;
    std::string mode = "with-replacement";
    bool allow_partial = false;
    double prior_alpha = kDefaultPrior.alpha;
    double prior_beta = kDefaultPrior.beta;
};

std::vector<std::uint16_t> parse_ports(const std::string& text, const std::string& key) {
    std::vector<std::uint16_t> ports;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        try {
            const long v = std::stol(item);
            if (v < 1 || v > 65535) throw std::out_of_range(item);
            ports.push_back(static_cast<std::uint16_t>(v));
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("{}: bad port '{}'", key, item));
        }
    }
    return ports;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, v));
}

// key=value lines: tcp_ports, udp_ports, icmp, timeout_ms,
// refused_counts_as_reachable. Flags given on the command line win.
void apply_suite_config(ProbeArgs& a, const CLI::App& sub) {
    std::ifstream f(a.suite_config);
    if (!f) throw ParseError("cannot open suite config " + a.suite_config, 0);
    std::size_t line_no = 0;
    for (std::string line; std::getline(f, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no).in_context(a.suite_config);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "tcp_ports") {
            if (sub.count("--tcp-ports") == 0) a.tcp_ports = parse_ports(value, key);
        } else if (key == "udp_ports") {
            if (sub.count("--udp-ports") == 0) a.udp_ports = parse_ports(value, key);
        } else if (key == "icmp") {
            if (sub.count("--icmp") == 0) a.icmp = parse_bool(value, key);
        } else if (key == "timeout_ms") {
            if (sub.count("--timeout-ms") == 0) {
                try {
                    a.timeout_ms = std::stol(value);
                } catch (const std::exception&) {
                    throw ParseError("timeout_ms: not a number", line_no).in_context(a.suite_config);
                }
            }
        } else if (key == "refused_counts_as_reachable") {
            if (sub.count("--refused-counts-as-reachable") == 0) a.refused_reachable = parse_bool(value, key);
        } else {
            throw ParseError("unknown key '" + key + "'", line_no).in_context(a.suite_config);
        }
    }
}

int cmd_probe(ProbeArgs a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    check_level(a.common.level);
    if (!a.suite_config.empty()) apply_suite_config(a, sub);

    std::optional<LoadedGraph> loaded;
    if (!a.graph.empty()) loaded = load_edge_list_file(a.graph);

    std::optional<NodeInventory> inventory;
    if (!a.inventory.empty()) {
        inventory = load_inventory_file(a.inventory);
    } else if (a.backend == "simulated" && loaded) {
        std::vector<InventoryEntry> entries;
        for (const auto& label : loaded->labels) entries.push_back({label, label});
        inventory.emplace(std::move(entries));
    } else {
        throw ConfigError("--inventory is required for the " + a.backend + " backend");
    }

    std::unique_ptr<ProbeBackend> backend;
    ProbeSuite suite;
    const std::chrono::milliseconds timeout{a.timeout_ms};
    if (a.backend == "simulated") {
        if (!loaded) throw ConfigError("--graph is required for the simulated backend");
        auto graph = std::make_shared<const Graph>(loaded->graph);
        backend = simulated_backend(graph, *inventory, loaded->index);
        suite = make_suite(a.tcp_ports.empty() ? std::vector<std::uint16_t>{80, 443} : a.tcp_ports, a.udp_ports,
                           a.icmp, timeout, a.refused_reachable);
    } else if (a.backend == "socket") {
        if (a.tcp_ports.empty() && a.udp_ports.empty() && !a.icmp)
            throw ConfigError("socket backend needs at least one of --tcp-ports, --udp-ports, --icmp");
        backend = socket_backend(a.common.deterministic);
        suite = make_suite(a.tcp_ports, a.udp_ports, a.icmp, timeout, a.refused_reachable);
    } else if (a.backend == "exec") {
        if (a.exec_template.empty()) throw ConfigError("--exec-template is required for the exec backend");
        backend = exec_backend(a.exec_template, a.exec_concurrent);
        suite.probes.push_back({ProbeKind::exec, 0, timeout});
        suite.refused_counts_as_reachable = false;
    } else {
        throw ConfigError("--backend must be simulated, socket or exec");
    }

    MeasurementOptions opts;
    opts.samples = a.samples;
    opts.level = a.common.level;
    opts.mode = parse_sample_mode(a.mode);
    opts.seed = a.common.seed;
    opts.parallelism = a.parallel;
    opts.prior = {a.prior_alpha, a.prior_beta};
    opts.allow_partial = a.allow_partial;
    opts.deterministic = a.common.deterministic;
    const MeasurementReport report = run_measurement(*inventory, suite, *backend, opts);

    out << to_text(report);
    if (!a.common.out.empty()) write_file(a.common.out, to_json(report, *inventory).dump(2) + "\n");
    if (report.partial) {
        const auto aborted = report.samples - report.completed;
        err << fmt::format("segmeter: {} of {} pairs aborted\n", aborted, report.samples);
        for (const auto& o : report.outcomes)
            if (o.aborted)
                err << fmt::format("  {} -> {}: {}\n", (*inventory)[o.src].id, (*inventory)[o.dst].id, o.abort_reason);
        return exit_partial;
    }
    return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measure how segmented a network is"};
    app.name("segmeter");
    app.require_subcommand(1);

    SampleSizeArgs ss;
    auto* s_ss = app.add_subcommand("samplesize", "Pairs needed for a margin of error");
    add_common(s_ss, ss.common, false);
    s_ss->add_option("--level", ss.levels, "Confidence level(s); default 0.90 0.95 0.99");
    s_ss->add_option("--epsilon", ss.epsilons, "Margin(s) of error; default 0.1 0.05");
    s_ss->add_option("--n", ss.ns, "Also print C(n,2) for these node counts");

    EstimateGraphArgs eg;
    auto* s_eg = app.add_subcommand("estimate-graph", "True and sampled density of an edge list");
    add_common(s_eg, eg.common);
    s_eg->add_option("graph", eg.graph, "Edge list")->required();
    s_eg->add_option("--M", eg.samples, "Pairs per trial")->capture_default_str();
    s_eg->add_option("--trials", eg.trials, "Monte Carlo trials")->capture_default_str();
    s_eg->add_option("--mode", eg.mode, "with-replacement | without-replacement")->capture_default_str();
    s_eg->add_flag("--single", eg.single, "One estimate instead of a Monte Carlo row");
    s_eg->add_option("--threads", eg.threads, "Worker threads (0 = all cores)");
    s_eg->add_option("--prior-alpha", eg.prior_alpha)->capture_default_str();
    s_eg->add_option("--prior-beta", eg.prior_beta)->capture_default_str();

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "Monte Carlo sweep over ER or SBM oracles");
    add_common(s_sim, sim.common);
    s_sim->add_option("--model", sim.model, "er | sbm")->capture_default_str();
    s_sim->add_option("--grid", sim.grid, "a:b:step or comma list of target densities")->capture_default_str();
    s_sim->add_option("--M", sim.samples)->capture_default_str();
    s_sim->add_option("--trials", sim.trials)->capture_default_str();
    s_sim->add_option("--n", sim.n)->capture_default_str();
    s_sim->add_option("--K", sim.blocks, "SBM block count")->capture_default_str();
    s_sim->add_option("--p-out", sim.p_out, "SBM between-block probability")->capture_default_str();
    s_sim->add_option("--density", sim.density, "asymptotic | finite")->capture_default_str();
    s_sim->add_option("--mode", sim.mode)->capture_default_str();
    s_sim->add_option("--config", sim.config, "key=value model file (n, K, p, p_in, p_out, seed)");
    s_sim->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

    MeasuresArgs ms;
    auto* s_ms = app.add_subcommand("measures", "Flatness vs modularity and Fiedler value");
    add_common(s_ms, ms.common);
    s_ms->add_option("manifest", ms.manifest, "Lines of `id path`")->required();
    s_ms->add_flag("--allow-large", ms.allow_large, "Compute Fiedler values above 5000 nodes");

    ProbeArgs pr;
    auto* s_pr = app.add_subcommand("probe", "Sample node pairs and test connectivity");
    add_common(s_pr, pr.common);
    s_pr->add_option("--backend", pr.backend, "simulated | socket | exec")->capture_default_str();
    s_pr->add_option("--graph", pr.graph, "Policy graph for the simulated backend");
    s_pr->add_option("--inventory", pr.inventory, "Lines of `id address`");
    s_pr->add_option("--M", pr.samples)->capture_default_str();
    s_pr->add_option("--tcp-ports", pr.tcp_ports)->delimiter(',');
    s_pr->add_option("--udp-ports", pr.udp_ports)->delimiter(',');
    s_pr->add_flag("--icmp", pr.icmp);
    s_pr->add_option("--timeout-ms", pr.timeout_ms)->capture_default_str();
    s_pr->add_option("--suite-config", pr.suite_config, "key=value probe suite file");
    s_pr->add_option("--exec-template", pr.exec_template, "Shell command with {src} {dst} {src_id} {dst_id}");
    s_pr->add_flag("--exec-concurrent", pr.exec_concurrent, "Allow parallel exec probes");
    s_pr->add_flag("--refused-counts-as-reachable", pr.refused_reachable);
    s_pr->add_option("--parallel", pr.parallel)->capture_default_str();
    s_pr->add_option("--mode", pr.mode)->capture_default_str();
    s_pr->add_flag("--allow-partial", pr.allow_partial, "Estimate from completed pairs when some abort");
    s_pr->add_option("--prior-alpha", pr.prior_alpha)->capture_default_str();
    s_pr->add_option("--prior-beta", pr.prior_beta)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (s_ss->parsed()) return cmd_samplesize(ss, out);
        if (s_eg->parsed()) return cmd_estimate_graph(eg, out);
        if (s_sim->parsed()) return cmd_simulate(sim, *s_sim, out, err);
        if (s_ms->parsed()) return cmd_measures(ms, out, err);
        if (s_pr->parsed()) return cmd_probe(pr, *s_pr, out, err);
    } catch (const ParseError& e) {
        err << "segmeter: " << e.what() << "\n";
        return exit_parse;
    } catch (const NumericalError& e) {
        err << "segmeter: " << e.what() << "\n";
        return exit_numerical;
    } catch (const ProbeError& e) {
        err << "segmeter: " << e.what() << "\n";
        return exit_partial;
    } catch (const Error& e) {
        err << "segmeter: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "segmeter: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace segmeter
