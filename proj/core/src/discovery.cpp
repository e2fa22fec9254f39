#include "cliquechain/discovery.hpp"

#include <memory>

namespace cliquechain {

DiscoveryResult discover_chains(const Graph& g, const DiscoveryOptions& options) {
  auto graph = std::make_shared<const Graph>(g);
  auto cliques = enumerate_maximal_cliques(*graph, options.min_size).cliques;
  auto session = ExplorationSession::create("", graph, std::move(cliques), options.fit);

  auto report = session.auto_mine(options.k, options.min_score);
  if (report.complete) session.refresh_scores();

  std::vector<CliquePattern> scored(session.cliques().begin(), session.cliques().end());
  return DiscoveryResult{std::move(report.chains), std::move(scored), session.background(),
                         report.complete, std::move(report.diagnostic)};
}

}  // namespace cliquechain
