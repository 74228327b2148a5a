#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "segmeter/graph.hpp"

namespace segmeter {

// Plain-text edge list: two whitespace-separated labels per line, comment
// lines start with `comment_prefix`. A `#node <label>` line declares a node
// that may have no edges (other tools read it as a comment).
struct EdgeListFormat {
    char comment_prefix = '#';
    std::string node_directive = "#node";
};

struct LoadedGraph {
    Graph graph;
    // labels[i] is the label of node i; nodes are numbered by first appearance.
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_lines = 0;
};

// Throws ParseError (with line number) on a line that does not hold exactly
// two labels, and on input that declares no nodes at all.
LoadedGraph load_edge_list(std::istream& in, const EdgeListFormat& format = {});
LoadedGraph load_edge_list_file(const std::filesystem::path& path, const EdgeListFormat& format = {});

// Writes `#node` lines for isolated nodes followed by one line per edge.
// Without labels, node indices are used.
void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& labels = {});

}  // namespace segmeter
