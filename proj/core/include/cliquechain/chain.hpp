#pragma once

#include <span>
#include <vector>

#include "cliquechain/cliques.hpp"

namespace cliquechain {

enum class ChainEnd { kFront, kBack };

std::string_view to_string(ChainEnd end) noexcept;

// Ordered cliques where each adjacent pair shares at least one vertex.
// connectors[i] is the overlap of cliques[i] and cliques[i + 1].
struct ChainPattern {
  std::vector<CliqueId> cliques;
  std::vector<VertexSet> connectors;

  bool contains(CliqueId id) const noexcept;
  std::size_t size() const noexcept { return cliques.size(); }
  CliqueId front() const { return cliques.front(); }
  CliqueId back() const { return cliques.back(); }

  friend bool operator==(const ChainPattern&, const ChainPattern&) = default;
};

// Adds `clique` at the given end; `members` are its vertices, `end_members`
// those of the clique currently at that end.
void attach(ChainPattern& chain, CliqueId clique, const VertexSet& members,
            const VertexSet& end_members, ChainEnd end);

// Connectors non-empty and consistent with the cliques; no clique repeated.
bool is_well_formed(const ChainPattern& chain, std::span<const CliquePattern> cliques);

// Union of the members of every clique in the chain.
VertexSet chain_vertices(const ChainPattern& chain, std::span<const CliquePattern> cliques);

}  // namespace cliquechain
