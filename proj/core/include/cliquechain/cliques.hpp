#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cliquechain/graph.hpp"

namespace cliquechain {

using CliqueId = std::uint32_t;

struct CliquePattern {
  CliqueId id = 0;
  VertexSet vertices;
  // Cached interestingness in nats, valid for background epoch score_epoch.
  std::optional<double> score;
  std::uint64_t score_epoch = 0;
};

struct CliqueEnumeration {
  std::vector<CliquePattern> cliques;
  // True when the input was directed and adjacency was taken in either direction.
  bool symmetrized = false;
};

inline constexpr std::size_t kDefaultMinCliqueSize = 3;

// Maximal cliques with at least min_size members. Ids follow the lexicographic
// order of each clique's sorted label sequence, so they are stable across runs.
CliqueEnumeration enumerate_maximal_cliques(const Graph& g,
                                            std::size_t min_size = kDefaultMinCliqueSize);

bool is_maximal_clique(const Graph& g, const VertexSet& s);

}  // namespace cliquechain
