#include "cliquechain/chain.hpp"

#include <algorithm>
#include <set>

#include "cliquechain/error.hpp"

namespace cliquechain {

std::string_view to_string(ChainEnd end) noexcept {
  return end == ChainEnd::kFront ? "front" : "back";
}

bool ChainPattern::contains(CliqueId id) const noexcept {
  return std::find(cliques.begin(), cliques.end(), id) != cliques.end();
}

void attach(ChainPattern& chain, CliqueId clique, const VertexSet& members,
            const VertexSet& end_members, ChainEnd end) {
  if (chain.cliques.empty()) {
    chain.cliques.push_back(clique);
    return;
  }
  auto connector = intersection(members, end_members);
  if (connector.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "clique does not overlap the chain end");
  }
  if (end == ChainEnd::kBack) {
    chain.cliques.push_back(clique);
    chain.connectors.push_back(std::move(connector));
  } else {
    chain.cliques.insert(chain.cliques.begin(), clique);
    chain.connectors.insert(chain.connectors.begin(), std::move(connector));
  }
}

bool is_well_formed(const ChainPattern& chain, std::span<const CliquePattern> cliques) {
  if (chain.cliques.empty()) return chain.connectors.empty();
  if (chain.connectors.size() + 1 != chain.cliques.size()) return false;
  std::set<CliqueId> seen;
  for (auto id : chain.cliques) {
    if (id >= cliques.size() || !seen.insert(id).second) return false;
  }
  for (std::size_t i = 0; i + 1 < chain.cliques.size(); ++i) {
    const auto expected =
        intersection(cliques[chain.cliques[i]].vertices, cliques[chain.cliques[i + 1]].vertices);
    if (expected.empty() || expected != chain.connectors[i]) return false;
  }
  return true;
}

VertexSet chain_vertices(const ChainPattern& chain, std::span<const CliquePattern> cliques) {
  std::vector<Vertex> all;
  for (auto id : chain.cliques) {
    const auto members = cliques[id].vertices.members();
    all.insert(all.end(), members.begin(), members.end());
  }
  return VertexSet(std::move(all));
}

}  // namespace cliquechain
