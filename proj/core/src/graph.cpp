#include "cliquechain/graph.hpp"

#include <algorithm>

#include "cliquechain/error.hpp"

namespace cliquechain {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

std::string_view to_string(Direction direction) noexcept {
  switch (direction) {
    case Direction::kIn: return "in";
    case Direction::kOut: return "out";
    case Direction::kUndirected: return "undirected";
  }
  return "undirected";
}

Direction parse_direction(std::string_view text) {
  if (text == "in") return Direction::kIn;
  if (text == "out") return Direction::kOut;
  if (text == "undirected") return Direction::kUndirected;
  throw Error(ErrorCode::kParse, "unknown direction '" + std::string(text) + "'");
}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

bool VertexSet::contains(Vertex v) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.members_.begin(), a.members_.end(), b.members_.begin(),
                        b.members_.end(), std::back_inserter(out.members_));
  return out;
}

bool intersects(const VertexSet& a, const VertexSet& b) noexcept {
  auto i = a.members_.begin();
  auto j = b.members_.begin();
  while (i != a.members_.end() && j != b.members_.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

Graph::Graph(std::vector<std::string> labels,
             const std::vector<std::pair<Vertex, Vertex>>& edges,
             bool directed,
             bool allow_self_loops)
    : labels_(std::move(labels)),
      out_(labels_.size()),
      in_(labels_.size()),
      directed_(directed),
      allow_self_loops_(allow_self_loops) {
  index_.reserve(labels_.size());
  for (Vertex v = 0; v < labels_.size(); ++v) {
    if (!index_.emplace(labels_[v], v).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vertex label '" + labels_[v] + "'");
    }
  }
  const auto n = labels_.size();
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (u == v && !allow_self_loops_) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop on '" + labels_[u] + "' not allowed");
    }
    out_[u].push_back(v);
    in_[v].push_back(u);
    if (!directed_ && u != v) {
      out_[v].push_back(u);
      in_[u].push_back(v);
    }
  }
  auto normalize = [](std::vector<Vertex>& list) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  };
  std::size_t ordered = 0;
  for (Vertex v = 0; v < n; ++v) {
    normalize(out_[v]);
    normalize(in_[v]);
    ordered += out_[v].size();
    if (std::binary_search(out_[v].begin(), out_[v].end(), v)) ++self_loops_;
  }
  num_edges_ = directed_ ? ordered : (ordered - self_loops_) / 2 + self_loops_;
}

Graph Graph::build(std::vector<std::string> labels,
                   const std::vector<LabelEdge>& edges,
                   bool directed,
                   bool allow_self_loops) {
  std::unordered_map<std::string, Vertex> index;
  for (Vertex v = 0; v < labels.size(); ++v) {
    if (!index.emplace(labels[v], v).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vertex label '" + labels[v] + "'");
    }
  }
  std::vector<std::pair<Vertex, Vertex>> resolved;
  resolved.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + a + ", " + b + ") references an unknown vertex");
    }
    resolved.emplace_back(ia->second, ib->second);
  }
  return Graph(std::move(labels), resolved, directed, allow_self_loops);
}

std::size_t Graph::ordered_edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& list : out_) total += list.size();
  return total;
}

std::optional<Vertex> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vertex Graph::vertex(std::string_view label) const {
  if (auto v = find(label)) return *v;
  throw Error(ErrorCode::kNotFound, "unknown vertex '" + std::string(label) + "'");
}

bool Graph::has_edge(Vertex from, Vertex to) const {
  const auto& list = out_.at(from);
  return std::binary_search(list.begin(), list.end(), to);
}

std::vector<std::vector<Vertex>> Graph::symmetrized_adjacency() const {
  std::vector<std::vector<Vertex>> adj(num_vertices());
  for (Vertex v = 0; v < num_vertices(); ++v) {
    auto& list = adj[v];
    std::set_union(out_[v].begin(), out_[v].end(), in_[v].begin(), in_[v].end(),
                   std::back_inserter(list));
    list.erase(std::remove(list.begin(), list.end(), v), list.end());
  }
  return adj;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> result;
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : out_[u]) {
      if (directed_ || u <= v) result.emplace_back(u, v);
    }
  }
  return result;
}

VertexSet Graph::all_vertices() const {
  std::vector<Vertex> all(num_vertices());
  for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
  return VertexSet(std::move(all));
}

double normalized_degree(const Graph& g, Vertex v, Direction direction) {
  if (v >= g.num_vertices()) {
    throw Error(ErrorCode::kInvalidArgument, "vertex index out of range");
  }
  if ((direction == Direction::kUndirected) == g.directed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "direction '" + std::string(to_string(direction)) + "' does not match graph kind");
  }
  const auto count = direction == Direction::kIn ? g.in_neighbors(v).size()
                                                 : g.out_neighbors(v).size();
  return static_cast<double>(count) / static_cast<double>(g.num_vertices());
}

double subgraph_density(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "density of an empty vertex set");
  std::size_t ordered = 0;
  for (Vertex u : s) {
    if (u >= g.num_vertices()) {
      throw Error(ErrorCode::kInvalidArgument, "vertex index out of range");
    }
    for (Vertex v : g.out_neighbors(u)) {
      if (s.contains(v)) ++ordered;
    }
  }
  const double k = static_cast<double>(s.size());
  return static_cast<double>(ordered) / (k * k);
}

bool is_complete(const Graph& g, const VertexSet& s) {
  for (Vertex u : s) {
    for (Vertex v : s) {
      if (u != v && !g.has_edge(u, v) && !g.has_edge(v, u)) return false;
    }
  }
  return true;
}

}  // namespace cliquechain
