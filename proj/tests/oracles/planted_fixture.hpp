#pragma once

// Planted-chain fixture: five 4-cliques on 16 random vertices of a 60-vertex
// graph, consecutive cliques sharing exactly one vertex, plus G(n, 0.03)
// noise. A noise edge is dropped when it would close a triangle through a
// planted vertex, so that noise cannot grow or merge the planted cliques and
// the planted cliques stay maximal.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cliquechain/graph.hpp"
#include "random_graphs.hpp"

namespace cliquechain::testkit {

struct PlantedFixture {
  Graph graph;
  std::vector<VertexSet> chain;  // planted cliques in path order
};

inline constexpr std::size_t kPlantedVertices = 60;
inline constexpr std::size_t kPlantedCliques = 5;
inline constexpr std::size_t kPlantedCliqueSize = 4;
inline constexpr double kPlantedNoise = 0.03;

inline PlantedFixture make_planted_fixture(std::uint64_t seed, std::size_t n = kPlantedVertices,
                                           double noise = kPlantedNoise) {
  Rng rng(seed);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
  }
  const std::size_t stride = kPlantedCliqueSize - 1;

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<bool> planted(n, false);
  std::vector<VertexSet> chain;
  for (std::size_t c = 0; c < kPlantedCliques; ++c) {
    std::vector<Vertex> members(order.begin() + c * stride,
                                order.begin() + c * stride + kPlantedCliqueSize);
    for (auto a : members) {
      planted[a] = true;
      for (auto b : members) {
        if (a != b) adj[a][b] = true;
      }
    }
    chain.emplace_back(std::move(members));
  }

  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!rng.bernoulli(noise) || adj[a][b]) continue;
      bool reject = false;
      for (Vertex w = 0; w < n && !reject; ++w) {
        if (adj[a][w] && adj[b][w] && (planted[a] || planted[b] || planted[w])) reject = true;
      }
      if (!reject) adj[a][b] = adj[b][a] = true;
    }
  }

  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (adj[a][b]) edges.emplace_back(a, b);
    }
  }
  return {Graph(numbered_labels(n), edges, false), std::move(chain)};
}

}  // namespace cliquechain::testkit
