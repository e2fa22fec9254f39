#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cliquechain/chain.hpp"
#include "cliquechain/cliques.hpp"
#include "cliquechain/graph.hpp"
#include "cliquechain/maxent.hpp"

namespace cliquechain {

enum class SessionStatus { kIdle, kExploring };

std::string_view to_string(SessionStatus status) noexcept;

struct RankedClique {
  CliqueId id;
  double score;
};

struct Candidate {
  CliqueId id;
  double score;
  ChainEnd end;
  VertexSet connector;  // shared vertices with the clique at `end`
};

struct FinalizedChain {
  ChainPattern chain;
  // Scores of the chain's cliques against the background they were chosen under.
  std::vector<double> scores;
  std::uint64_t score_epoch = 0;
  // Background epoch after the chain was folded into the model.
  std::uint64_t background_epoch = 0;
};

struct MiningReport {
  std::vector<FinalizedChain> chains;
  bool complete = true;
  std::string diagnostic;
};

inline constexpr double kDefaultMinScore = 1e-3;

// Stateful exploration over one dataset: idle -> exploring (start),
// exploring -> exploring (extend), exploring -> idle (finalize or clear).
// Not internally synchronized; callers serialize writers.
class ExplorationSession {
 public:
  ExplorationSession(std::string dataset_id, std::shared_ptr<const Graph> graph,
                     std::vector<CliquePattern> cliques, EdgeProbabilityModel background,
                     FitOptions options = {});

  // Fits the degree-only background for the graph. Throws kNonConvergence.
  static ExplorationSession create(std::string dataset_id, std::shared_ptr<const Graph> graph,
                                   std::vector<CliquePattern> cliques, FitOptions options = {});

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  const Graph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const Graph>& shared_graph() const noexcept { return graph_; }
  const EdgeProbabilityModel& background() const noexcept { return background_; }
  std::uint64_t epoch() const noexcept { return background_.epoch(); }
  const FitOptions& fit_options() const noexcept { return options_; }

  SessionStatus status() const noexcept {
    return chain_ ? SessionStatus::kExploring : SessionStatus::kIdle;
  }
  const std::optional<ChainPattern>& current_chain() const noexcept { return chain_; }
  const std::vector<FinalizedChain>& finalized_chains() const noexcept { return finalized_; }

  std::span<const CliquePattern> cliques() const noexcept { return cliques_; }
  const CliquePattern& clique(CliqueId id) const;

  // Scores cached for an older background epoch are stale.
  bool scores_fresh() const noexcept;
  void refresh_scores();

  // All cliques by descending score, ties by ascending id. The mutable
  // overloads recompute stale scores first; the const ones require fresh scores.
  std::vector<RankedClique> rank_cliques();
  std::vector<RankedClique> rank_cliques() const;

  // Cliques outside the chain overlapping its first or last clique, ordered
  // like rank_cliques. A clique overlapping both ends attaches at the back.
  std::vector<Candidate> candidate_cliques();
  std::vector<Candidate> candidate_cliques() const;

  // expected_epoch, when given, must equal the current background epoch.
  void start_chain(CliqueId id, std::optional<std::uint64_t> expected_epoch = std::nullopt);
  void extend_chain(CliqueId id, std::optional<std::uint64_t> expected_epoch = std::nullopt);
  // Folds every clique of the chain into the background. On non-convergence
  // the chain is kept and the background is left untouched.
  const FinalizedChain& finalize_chain(std::optional<std::uint64_t> expected_epoch = std::nullopt);
  void clear_chain() noexcept;

  // Greedy automatic discovery of up to k chains from the idle state.
  MiningReport auto_mine(std::size_t k, double min_score = kDefaultMinScore);

  // Restores mid-session state (used by snapshot loading).
  void restore(std::optional<ChainPattern> chain, std::vector<FinalizedChain> finalized);

 private:
  void check_epoch(std::optional<std::uint64_t> expected_epoch) const;
  void require_fresh() const;

  std::string dataset_id_;
  std::shared_ptr<const Graph> graph_;
  std::vector<CliquePattern> cliques_;
  EdgeProbabilityModel background_;
  FitOptions options_;
  std::optional<ChainPattern> chain_;
  std::vector<FinalizedChain> finalized_;
};

}  // namespace cliquechain
