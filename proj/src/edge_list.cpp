#include "segmeter/edge_list.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "segmeter/errors.hpp"

namespace segmeter {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream ss{std::string(s)};
    for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
    return out;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in, const EdgeListFormat& format) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    std::vector<NodePair> edges;
    std::size_t self_loops = 0;

    auto intern = [&](const std::string& label) -> NodeId {
        auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (!format.node_directive.empty() && line.starts_with(format.node_directive) &&
            (line.size() == format.node_directive.size() ||
             line[format.node_directive.size()] == ' ' || line[format.node_directive.size()] == '\t')) {
            const auto toks = tokens(line.substr(format.node_directive.size()));
            if (toks.size() != 1)
                throw ParseError("node directive needs exactly one label", line_no);
            intern(toks[0]);
            continue;
        }
        if (line.front() == format.comment_prefix) continue;

        const auto toks = tokens(line);
        if (toks.size() != 2)
            throw ParseError("expected 2 node labels, found " + std::to_string(toks.size()), line_no);
        const NodeId a = intern(toks[0]);
        const NodeId b = intern(toks[1]);
        if (a == b) {
            ++self_loops;
            continue;
        }
        edges.push_back(make_pair(a, b));
    }
    if (labels.empty()) throw ParseError("empty edge list: no nodes declared", 0);

    const std::size_t edge_lines = edges.size();
    Graph graph(labels.size(), edges);
    const std::size_t duplicates = edge_lines - graph.edge_count();
    return LoadedGraph{std::move(graph), std::move(labels), std::move(index), self_loops, duplicates};
}

LoadedGraph load_edge_list_file(const std::filesystem::path& path, const EdgeListFormat& format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list " + path.string(), 0);
    try {
        return load_edge_list(in, format);
    } catch (const ParseError& e) {
        throw e.in_context(path.string());
    }
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& labels) {
    auto name = [&](NodeId u) { return labels.empty() ? std::to_string(u) : labels[u]; };
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (g.degree(u) == 0) out << "#node " << name(u) << '\n';
    for (const auto& e : g.edges()) out << name(e.u) << ' ' << name(e.v) << '\n';
}

}  // namespace segmeter
