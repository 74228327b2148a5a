#include "segmeter/prober.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "segmeter/errors.hpp"

namespace segmeter {

NodeInventory::NodeInventory(std::vector<InventoryEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!index_.try_emplace(entries_[i].id, i).second)
            throw ConfigError("duplicate inventory id '" + entries_[i].id + "'");
    if (entries_.size() < 2) throw ConfigError("inventory needs at least 2 nodes to sample pairs");
}

std::optional<std::size_t> NodeInventory::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeInventory load_inventory(std::istream& in) {
    std::vector<InventoryEntry> entries;
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string first, second, extra;
        if (!(ss >> first) || first.front() == '#') continue;
        if (ss >> second && ss >> extra)
            throw ParseError("expected 'id address' or a bare address", line_no);
        InventoryEntry e{first, second.empty() ? first : second};
        if (auto [it, inserted] = seen.try_emplace(e.id, line_no); !inserted)
            throw ParseError("duplicate id '" + e.id + "' (first seen on line " + std::to_string(it->second) + ")",
                             line_no);
        entries.push_back(std::move(e));
    }
    if (entries.size() < 2)
        throw ParseError("inventory has " + std::to_string(entries.size()) + " entries; need at least 2", 0);
    return NodeInventory(std::move(entries));
}

NodeInventory load_inventory_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open inventory " + path.string(), 0);
    try {
        return load_inventory(in);
    } catch (const ParseError& e) {
        throw e.in_context(path.string());
    }
}

std::string_view to_string(ProbeKind k) noexcept {
    switch (k) {
        case ProbeKind::icmp: return "icmp";
        case ProbeKind::tcp: return "tcp";
        case ProbeKind::udp: return "udp";
        case ProbeKind::exec: return "exec";
    }
    return "?";
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::success: return "success";
        case Verdict::refused: return "refused";
        case Verdict::timeout: return "timeout";
        case Verdict::error: return "error";
    }
    return "?";
}

std::string ProbeSpec::label() const {
    if (kind == ProbeKind::tcp || kind == ProbeKind::udp)
        return fmt::format("{}:{}/{}ms", to_string(kind), port, timeout.count());
    return fmt::format("{}/{}ms", to_string(kind), timeout.count());
}

void ProbeSuite::validate() const {
    if (probes.empty()) throw ConfigError("probe suite is empty");
    for (const auto& p : probes)
        if (p.timeout.count() <= 0) throw ConfigError("probe timeout must be positive: " + p.label());
}

std::string ProbeSuite::describe() const {
    std::string out;
    for (const auto& p : probes) {
        if (!out.empty()) out += ',';
        out += p.label();
    }
    out += refused_counts_as_reachable ? ";refused=reachable" : ";refused=unreachable";
    return out;
}

std::string ProbeSuite::fingerprint() const {
    // FNV-1a, stable across platforms and builds.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : describe()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

ProbeSuite make_suite(const std::vector<std::uint16_t>& tcp_ports, const std::vector<std::uint16_t>& udp_ports,
                      bool icmp, std::chrono::milliseconds timeout, bool refused_counts_as_reachable) {
    ProbeSuite s;
    if (icmp) s.probes.push_back({ProbeKind::icmp, 0, timeout});
    for (auto p : tcp_ports) s.probes.push_back({ProbeKind::tcp, p, timeout});
    for (auto p : udp_ports) s.probes.push_back({ProbeKind::udp, p, timeout});
    s.refused_counts_as_reachable = refused_counts_as_reachable;
    return s;
}

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

bool counts_as_connected(const ProbeResult& r, const ProbeSuite& suite) {
    if (r.verdict == Verdict::success) return true;
    return r.verdict == Verdict::refused && r.spec.kind == ProbeKind::tcp && suite.refused_counts_as_reachable;
}

}  // namespace

ProbeOutcome probe_pair(const NodeInventory& inventory, std::size_t src, std::size_t dst, const ProbeSuite& suite,
                        ProbeBackend& backend, bool deterministic) {
    suite.validate();
    if (src >= inventory.size() || dst >= inventory.size()) throw DomainError("pair outside inventory");
    ProbeOutcome out;
    out.src = src;
    out.dst = dst;
    out.timestamp_ms = deterministic ? 0 : now_ms();
    bool saw_error = false;
    for (const auto& spec : suite.probes) {
        ProbeResult r;
        try {
            r = backend.probe(inventory[src], inventory[dst], spec);
        } catch (const ProbeError& e) {
            out.aborted = true;
            out.abort_reason = e.what();
            out.connected = false;
            return out;
        }
        if (deterministic) r.latency_ms = 0.0;
        saw_error = saw_error || r.verdict == Verdict::error;
        const bool ok = counts_as_connected(r, suite);
        out.results.push_back(std::move(r));
        if (ok) {
            out.connected = true;
            return out;
        }
    }
    if (saw_error) {
        out.aborted = true;
        out.abort_reason = "no probe succeeded and at least one probe errored";
    }
    return out;
}

MeasurementReport run_measurement(const NodeInventory& inventory, const ProbeSuite& suite, ProbeBackend& backend,
                                  const MeasurementOptions& options) {
    suite.validate();
    if (options.samples < 1) throw ConfigError("M must be >= 1");
    if (!(options.level > 0.0 && options.level < 1.0)) throw ConfigError("level must lie in (0,1)");
    validate(options.prior);

    MeasurementReport report;
    report.nodes = inventory.size();
    report.samples = options.samples;
    report.suite = suite.describe();
    report.suite_fingerprint = suite.fingerprint();
    report.backend = backend.id();
    report.vantage = backend.vantage();
    report.seed = options.seed;
    report.mode = options.mode;
    report.started_ms = options.deterministic ? 0 : now_ms();

    const auto pairs = sample_pairs({inventory.size(), options.samples, options.mode, options.seed});
    report.outcomes.resize(pairs.size());

    std::size_t workers = backend.concurrent_safe() ? std::max<std::size_t>(1, options.parallelism) : 1;
    workers = std::min(workers, pairs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < pairs.size();)
            report.outcomes[i] = probe_pair(inventory, pairs[i].u, pairs[i].v, suite, backend, options.deterministic);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (const auto& o : report.outcomes) {
        if (o.aborted) {
            report.partial = true;
            continue;
        }
        ++report.completed;
        report.connected += o.connected ? 1 : 0;
    }
    if ((!report.partial || options.allow_partial) && report.completed > 0) {
        report.estimate = estimate_with_policy(report.connected, report.completed, options.level, options.prior);
        report.estimate->seed = options.seed;
    }
    return report;
}

nlohmann::ordered_json to_json(const MeasurementReport& r, const NodeInventory& inventory) {
    nlohmann::ordered_json j;
    j["n"] = r.nodes;
    j["M"] = r.samples;
    j["completed"] = r.completed;
    j["k"] = r.connected;
    j["partial"] = r.partial;
    j["mode"] = to_string(r.mode);
    j["seed"] = r.seed;
    j["backend"] = r.backend;
    j["vantage"] = r.vantage;
    j["suite"] = r.suite;
    j["suite_fingerprint"] = r.suite_fingerprint;
    j["started_ms"] = r.started_ms;
    j["estimate"] = r.estimate ? to_json(*r.estimate) : nlohmann::ordered_json(nullptr);
    auto& pairs = j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& o : r.outcomes) {
        nlohmann::ordered_json p;
        p["src"] = inventory[o.src].id;
        p["dst"] = inventory[o.dst].id;
        p["connected"] = o.connected;
        if (o.aborted) p["abort"] = o.abort_reason;
        auto& probes = p["probes"] = nlohmann::ordered_json::array();
        for (const auto& res : o.results) {
            nlohmann::ordered_json q;
            q["probe"] = res.spec.label();
            q["verdict"] = to_string(res.verdict);
            q["latency_ms"] = res.latency_ms;
            if (!res.detail.empty()) q["detail"] = res.detail;
            probes.push_back(std::move(q));
        }
        p["timestamp_ms"] = o.timestamp_ms;
        pairs.push_back(std::move(p));
    }
    return j;
}

std::string to_text(const MeasurementReport& r) {
    std::string out;
    out += fmt::format("inventory n     {}\n", r.nodes);
    out += fmt::format("backend         {} (vantage: {})\n", r.backend, r.vantage);
    out += fmt::format("suite           {} [{}]\n", r.suite, r.suite_fingerprint);
    out += fmt::format("sampling        {}, seed {}\n", to_string(r.mode), r.seed);
    out += fmt::format("pairs completed {}/{}{}\n", r.completed, r.samples, r.partial ? " (PARTIAL)" : "");
    if (r.estimate) {
        out += to_text(*r.estimate);
    } else {
        out += "no estimate: measurement incomplete (rerun, or pass --allow-partial)\n";
    }
    return out;
}

}  // namespace segmeter
