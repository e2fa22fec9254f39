#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cliquechain {

using Vertex = std::uint32_t;

enum class Direction { kIn, kOut, kUndirected };

std::string_view to_string(Direction direction) noexcept;
Direction parse_direction(std::string_view text);

// Sorted, duplicate-free set of vertex indices. The induced edge set is always
// derived from the owning graph and never stored here.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> members);
  VertexSet(std::initializer_list<Vertex> members);

  std::span<const Vertex> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Vertex v) const noexcept;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend VertexSet intersection(const VertexSet& a, const VertexSet& b);
  friend bool intersects(const VertexSet& a, const VertexSet& b) noexcept;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  friend auto operator<=>(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

// Vertex-labelled simple graph. Undirected graphs store each edge once as an
// unordered pair; directed graphs store ordered pairs. Immutable once built.
class Graph {
 public:
  using LabelEdge = std::pair<std::string, std::string>;

  Graph(std::vector<std::string> labels,
        const std::vector<std::pair<Vertex, Vertex>>& edges,
        bool directed,
        bool allow_self_loops = false);

  // Errors on duplicate labels, unknown endpoints and disallowed self-loops.
  static Graph build(std::vector<std::string> labels,
                     const std::vector<LabelEdge>& edges,
                     bool directed,
                     bool allow_self_loops = false);

  std::size_t num_vertices() const noexcept { return labels_.size(); }
  // Undirected: number of unordered pairs. Directed: number of arcs.
  std::size_t num_edges() const noexcept { return num_edges_; }
  // Edges counted as ordered pairs; an undirected edge counts twice.
  std::size_t ordered_edge_count() const noexcept;

  bool directed() const noexcept { return directed_; }
  bool allow_self_loops() const noexcept { return allow_self_loops_; }

  const std::string& label(Vertex v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<Vertex> find(std::string_view label) const;
  Vertex vertex(std::string_view label) const;

  // For undirected graphs has_edge is symmetric.
  bool has_edge(Vertex from, Vertex to) const;
  std::span<const Vertex> out_neighbors(Vertex v) const { return out_.at(v); }
  std::span<const Vertex> in_neighbors(Vertex v) const { return in_.at(v); }
  // Adjacency ignoring direction, without self-loops.
  std::vector<std::vector<Vertex>> symmetrized_adjacency() const;

  // Canonical edge list: sorted; undirected pairs have first < second.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  VertexSet all_vertices() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::size_t num_edges_ = 0;
  std::size_t self_loops_ = 0;
  bool directed_;
  bool allow_self_loops_;
};

// Incident edge count in the given direction divided by |V|.
double normalized_degree(const Graph& g, Vertex v, Direction direction);

// Ordered-pair edge count inside s divided by |s|^2.
double subgraph_density(const Graph& g, const VertexSet& s);

bool is_complete(const Graph& g, const VertexSet& s);

}  // namespace cliquechain
