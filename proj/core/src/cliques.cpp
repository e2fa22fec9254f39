#include "cliquechain/cliques.hpp"

#include <algorithm>
#include <iterator>
#include <string_view>

namespace cliquechain {
namespace {

using VertexList = std::vector<Vertex>;

VertexList intersect(const VertexList& sorted, const VertexList& neighbors) {
  VertexList out;
  std::set_intersection(sorted.begin(), sorted.end(), neighbors.begin(), neighbors.end(),
                        std::back_inserter(out));
  return out;
}

// Eppstein, Loffler and Strash: an outer loop in degeneracy order with a
// Tomita-pivoted Bron-Kerbosch recursion for each vertex.
class MaximalCliqueFinder {
 public:
  MaximalCliqueFinder(const std::vector<VertexList>& adj, std::size_t min_size)
      : adj_(adj), min_size_(min_size) {}

  std::vector<VertexList> run() {
    const auto order = degeneracy_order();
    std::vector<std::size_t> position(adj_.size());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

    for (Vertex v : order) {
      VertexList candidates;
      VertexList excluded;
      for (Vertex w : adj_[v]) {
        (position[w] > position[v] ? candidates : excluded).push_back(w);
      }
      std::sort(candidates.begin(), candidates.end());
      std::sort(excluded.begin(), excluded.end());
      current_.assign(1, v);
      expand(std::move(candidates), std::move(excluded));
    }
    return std::move(found_);
  }

 private:
  VertexList degeneracy_order() const {
    const auto n = adj_.size();
    std::vector<std::size_t> degree(n);
    std::size_t max_degree = 0;
    for (Vertex v = 0; v < n; ++v) {
      degree[v] = adj_[v].size();
      max_degree = std::max(max_degree, degree[v]);
    }
    std::vector<VertexList> buckets(max_degree + 1);
    for (Vertex v = 0; v < n; ++v) buckets[degree[v]].push_back(v);
    std::vector<bool> removed(n, false);
    VertexList order;
    order.reserve(n);
    std::size_t lowest = 0;
    while (order.size() < n) {
      while (lowest < buckets.size() && buckets[lowest].empty()) ++lowest;
      auto& bucket = buckets[lowest];
      Vertex v = bucket.back();
      bucket.pop_back();
      if (removed[v] || degree[v] != lowest) continue;  // stale bucket entry
      removed[v] = true;
      order.push_back(v);
      for (Vertex w : adj_[v]) {
        if (removed[w]) continue;
        --degree[w];
        buckets[degree[w]].push_back(w);
        lowest = std::min(lowest, degree[w]);
      }
    }
    return order;
  }

  void expand(VertexList candidates, VertexList excluded) {
    if (candidates.empty()) {
      if (excluded.empty() && current_.size() >= min_size_) found_.push_back(current_);
      return;
    }
    if (current_.size() + candidates.size() < min_size_) return;

    // Pivot maximizing |candidates ∩ N(pivot)| over candidates ∪ excluded.
    Vertex pivot = candidates.front();
    std::size_t best = 0;
    bool first = true;
    for (const auto* pool : {&candidates, &excluded}) {
      for (Vertex u : *pool) {
        const auto covered = intersect(candidates, adj_[u]).size();
        if (first || covered > best) {
          pivot = u;
          best = covered;
          first = false;
        }
      }
    }

    VertexList branch;
    std::set_difference(candidates.begin(), candidates.end(), adj_[pivot].begin(),
                        adj_[pivot].end(), std::back_inserter(branch));
    for (Vertex v : branch) {
      current_.push_back(v);
      expand(intersect(candidates, adj_[v]), intersect(excluded, adj_[v]));
      current_.pop_back();
      candidates.erase(std::lower_bound(candidates.begin(), candidates.end(), v));
      excluded.insert(std::lower_bound(excluded.begin(), excluded.end(), v), v);
    }
  }

  const std::vector<VertexList>& adj_;
  std::size_t min_size_;
  VertexList current_;
  std::vector<VertexList> found_;
};

}  // namespace

CliqueEnumeration enumerate_maximal_cliques(const Graph& g, std::size_t min_size) {
  const auto adj = g.symmetrized_adjacency();
  auto raw = MaximalCliqueFinder(adj, std::max<std::size_t>(min_size, 1)).run();

  struct Keyed {
    std::vector<std::string_view> labels;
    VertexSet vertices;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(raw.size());
  for (auto& members : raw) {
    Keyed k{{}, VertexSet(std::move(members))};
    for (Vertex v : k.vertices) k.labels.push_back(g.label(v));
    std::sort(k.labels.begin(), k.labels.end());
    keyed.push_back(std::move(k));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const Keyed& a, const Keyed& b) { return a.labels < b.labels; });

  CliqueEnumeration result;
  result.symmetrized = g.directed();
  result.cliques.reserve(keyed.size());
  for (CliqueId id = 0; id < keyed.size(); ++id) {
    result.cliques.push_back(CliquePattern{id, std::move(keyed[id].vertices), std::nullopt, 0});
  }
  return result;
}

bool is_maximal_clique(const Graph& g, const VertexSet& s) {
  if (s.empty() || !is_complete(g, s)) return false;
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    if (s.contains(w)) continue;
    bool adjacent_to_all = true;
    for (Vertex u : s) {
      if (!g.has_edge(u, w) && !g.has_edge(w, u)) {
        adjacent_to_all = false;
        break;
      }
    }
    if (adjacent_to_all) return false;
  }
  return true;
}

}  // namespace cliquechain
