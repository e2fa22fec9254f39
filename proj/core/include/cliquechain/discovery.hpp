#pragma once

#include <string>
#include <vector>

#include "cliquechain/cliques.hpp"
#include "cliquechain/graph.hpp"
#include "cliquechain/maxent.hpp"
#include "cliquechain/session.hpp"

namespace cliquechain {

struct DiscoveryOptions {
  std::size_t k = 1;
  double min_score = kDefaultMinScore;
  std::size_t min_size = kDefaultMinCliqueSize;
  FitOptions fit;
};

struct DiscoveryResult {
  std::vector<FinalizedChain> chains;
  std::vector<CliquePattern> cliques;  // scores as of the final background
  EdgeProbabilityModel background;     // after folding in every chain
  bool complete = true;                // false when a fit failed mid-run
  std::string diagnostic;
};

// Greedy connected-subgraph discovery: fit the degree background, enumerate
// maximal cliques, then repeatedly seed a chain with the top-scoring clique,
// grow it at either end with the best overlapping clique while scores stay at
// or above min_score, and fold the chain into the background.
// Throws kNonConvergence if the initial background cannot be fitted.
DiscoveryResult discover_chains(const Graph& g, const DiscoveryOptions& options = {});

}  // namespace cliquechain
