#include "cliquechain/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "cliquechain/error.hpp"

namespace cliquechain {
namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Graph read_edge_list(std::istream& in, bool directed) {
  std::set<std::string> labels;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim_cr(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (first_content && line == "# directed") directed = true;
      continue;
    }
    first_content = false;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      labels.emplace(line);
      continue;
    }
    auto a = line.substr(0, tab);
    auto b = line.substr(tab + 1);
    if (a.empty() || b.empty() || b.find('\t') != std::string_view::npos) {
      throw Error(ErrorCode::kParse,
                  "edge list line " + std::to_string(line_no) + ": expected 'label<TAB>label'");
    }
    labels.emplace(a);
    labels.emplace(b);
    edges.emplace_back(std::string(a), std::string(b));
  }
  try {
    return Graph::build({labels.begin(), labels.end()}, edges, directed);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("edge list: ") + e.what());
  }
}

Graph read_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open edge list '" + path + "'");
  return read_edge_list(in, directed);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  if (g.directed()) out << "# directed\n";
  std::vector<std::pair<std::string_view, std::string_view>> lines;
  std::vector<bool> touched(g.num_vertices(), false);
  for (auto [u, v] : g.edges()) {
    std::string_view a = g.label(u);
    std::string_view b = g.label(v);
    if (!g.directed() && b < a) std::swap(a, b);
    lines.emplace_back(a, b);
    touched[u] = touched[v] = true;
  }
  std::sort(lines.begin(), lines.end());
  for (auto [a, b] : lines) out << a << '\t' << b << '\n';

  std::vector<std::string_view> isolated;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!touched[v]) isolated.push_back(g.label(v));
  }
  std::sort(isolated.begin(), isolated.end());
  for (auto label : isolated) out << label << '\n';
}

std::string dot_quote(const std::string& label) {
  std::string quoted = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') quoted += '\\';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_dot(std::ostream& out, const Graph& g, const std::string& name) {
  const char* arrow = g.directed() ? " -> " : " -- ";
  out << (g.directed() ? "digraph " : "graph ") << dot_quote(name) << " {\n";
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    out << "  " << dot_quote(g.label(v)) << ";\n";
  }
  for (auto [u, v] : g.edges()) {
    out << "  " << dot_quote(g.label(u)) << arrow << dot_quote(g.label(v)) << ";\n";
  }
  out << "}\n";
}

}  // namespace cliquechain
