#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "segmeter/bayes.hpp"
#include "segmeter/graph.hpp"
#include "segmeter/report.hpp"
#include "segmeter/sampling.hpp"

namespace segmeter {

struct InventoryEntry {
    std::string id;
    std::string address;  // hostname or IP literal
};

class NodeInventory {
public:
    // Throws ConfigError on duplicate ids or fewer than 2 entries.
    explicit NodeInventory(std::vector<InventoryEntry> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    const InventoryEntry& operator[](std::size_t i) const noexcept { return entries_[i]; }
    const std::vector<InventoryEntry>& entries() const noexcept { return entries_; }
    std::optional<std::size_t> find(std::string_view id) const;

private:
    std::vector<InventoryEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// One entry per line: `id address`, or a bare address used as both.
// '#' comments and blank lines are skipped. Duplicate ids throw ParseError
// naming the offending line.
NodeInventory load_inventory(std::istream& in);
NodeInventory load_inventory_file(const std::filesystem::path& path);

enum class ProbeKind { icmp, tcp, udp, exec };
std::string_view to_string(ProbeKind k) noexcept;

struct ProbeSpec {
    ProbeKind kind = ProbeKind::tcp;
    std::uint16_t port = 0;  // tcp/udp only
    std::chrono::milliseconds timeout{1000};

    std::string label() const;
};

// Ordered, fixed battery of tests. A pair is connected when any test
// succeeds.
struct ProbeSuite {
    std::vector<ProbeSpec> probes;
    // Count an active TCP refusal (RST) as reachable.
    bool refused_counts_as_reachable = false;

    // Throws ConfigError when empty or a timeout is not positive.
    void validate() const;
    std::string describe() const;
    // Stable hash of describe(); reports are only comparable when it matches.
    std::string fingerprint() const;
};

// Convenience builder matching the CLI flags.
ProbeSuite make_suite(const std::vector<std::uint16_t>& tcp_ports, const std::vector<std::uint16_t>& udp_ports,
                      bool icmp, std::chrono::milliseconds timeout, bool refused_counts_as_reachable = false);

enum class Verdict { success, refused, timeout, error };
std::string_view to_string(Verdict v) noexcept;

struct ProbeResult {
    ProbeSpec spec;
    Verdict verdict = Verdict::error;
    double latency_ms = 0.0;
    std::string detail;
};

struct ProbeOutcome {
    std::size_t src = 0;  // inventory indices
    std::size_t dst = 0;
    bool connected = false;
    // No verdict could be reached (backend failure or only error verdicts).
    bool aborted = false;
    std::string abort_reason;
    std::vector<ProbeResult> results;
    std::int64_t timestamp_ms = 0;
};

// A way of testing whether src may talk to dst. Implementations throw
// ProbeError when they cannot run at all; a per-probe failure is an
// `error` verdict.
class ProbeBackend {
public:
    virtual ~ProbeBackend() = default;
    virtual std::string id() const = 0;
    // Where probes actually originate.
    virtual std::string vantage() const = 0;
    // False means run_measurement drives the backend from one thread.
    virtual bool concurrent_safe() const = 0;
    virtual ProbeResult probe(const InventoryEntry& src, const InventoryEntry& dst, const ProbeSpec& spec) = 0;
};

// Answers from a policy graph: success iff the two mapped nodes share an
// edge. Direct edges only, symmetric, zero latency.
std::unique_ptr<ProbeBackend> simulated_backend(std::shared_ptr<const Graph> graph, const NodeInventory& inventory,
                                                const std::unordered_map<std::string, NodeId>& node_of_id);
std::unique_ptr<ProbeBackend> simulated_backend(std::shared_ptr<const Graph> graph, const NodeInventory& inventory,
                                                std::vector<NodeId> node_of_entry);

// Runs `/bin/sh -c <template>` per probe with {src}, {dst}, {src_id},
// {dst_id} substituted (shell-quoted); any other {name} is a ConfigError.
// Exit 0 = connected; nonzero or a timeout kill = not connected. Serial
// unless `concurrent` is set.
std::unique_ptr<ProbeBackend> exec_backend(std::string command_template, bool concurrent = false);

// TCP connect / UDP exchange / ICMP echo from this host to dst. src is
// ignored: this host stands in for every source.
std::unique_ptr<ProbeBackend> socket_backend(bool deterministic = false);

// Runs the suite in order, stopping at the first success.
ProbeOutcome probe_pair(const NodeInventory& inventory, std::size_t src, std::size_t dst, const ProbeSuite& suite,
                        ProbeBackend& backend, bool deterministic = false);

struct MeasurementOptions {
    std::size_t samples = 97;
    double level = 0.95;
    SampleMode mode = SampleMode::with_replacement;
    std::uint64_t seed = 0;
    std::size_t parallelism = 8;
    PosteriorBeta prior = kDefaultPrior;
    // Emit an estimate from the completed pairs even if some aborted.
    bool allow_partial = false;
    // Zero timestamps so reports are byte-reproducible.
    bool deterministic = false;
};

struct MeasurementReport {
    std::size_t nodes = 0;
    std::size_t samples = 0;
    std::size_t connected = 0;  // k over completed pairs
    std::size_t completed = 0;
    bool partial = false;
    std::optional<EstimateReport> estimate;
    std::string suite;
    std::string suite_fingerprint;
    std::string backend;
    std::string vantage;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::with_replacement;
    std::int64_t started_ms = 0;
    std::vector<ProbeOutcome> outcomes;  // in sample order
};

MeasurementReport run_measurement(const NodeInventory& inventory, const ProbeSuite& suite, ProbeBackend& backend,
                                  const MeasurementOptions& options);

nlohmann::ordered_json to_json(const MeasurementReport& r, const NodeInventory& inventory);
std::string to_text(const MeasurementReport& r);

}  // namespace segmeter
