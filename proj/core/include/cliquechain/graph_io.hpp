#pragma once

#include <iosfwd>
#include <string>

#include "cliquechain/graph.hpp"

namespace cliquechain {

// Edge-list text format:
//   * one `label<TAB>label` per line;
//   * a line holding a single label declares an isolated vertex;
//   * `#` starts a comment line; the comment `# directed` marks a directed graph.
// Vertices are numbered in byte-wise label order, so a graph with sorted labels
// survives a write/read cycle unchanged.
Graph read_edge_list(std::istream& in, bool directed = false);
Graph read_edge_list_file(const std::string& path, bool directed = false);

void write_edge_list(std::ostream& out, const Graph& g);

// Graphviz rendering of the whole graph.
void write_dot(std::ostream& out, const Graph& g, const std::string& name = "G");

// Quotes and escapes a label for use as a DOT identifier.
std::string dot_quote(const std::string& label);

}  // namespace cliquechain
