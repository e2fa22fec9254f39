#include "cliquechain/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "cliquechain/error.hpp"
#include "cliquechain/interestingness.hpp"

namespace cliquechain {
namespace {

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads and
// rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// Scores that agree to about 1e-7 relative count as tied. Mathematically equal
// scores come out of the refits differing slightly when pairs sit on the clamp;
// rounding on a log grid keeps the order a strict weak ordering.
double rank_key(double score) {
  return score > 0.0 ? std::nearbyint(std::log(score) * 1e7) : -std::numeric_limits<double>::infinity();
}

bool ranks_before(double score_a, CliqueId id_a, double score_b, CliqueId id_b) {
  const double ka = rank_key(score_a), kb = rank_key(score_b);
  if (ka != kb) return ka > kb;
  return id_a < id_b;
}

}  // namespace

std::string_view to_string(SessionStatus status) noexcept {
  return status == SessionStatus::kIdle ? "idle" : "exploring";
}

ExplorationSession::ExplorationSession(std::string dataset_id, std::shared_ptr<const Graph> graph,
                                       std::vector<CliquePattern> cliques,
                                       EdgeProbabilityModel background, FitOptions options)
    : dataset_id_(std::move(dataset_id)),
      graph_(std::move(graph)),
      cliques_(std::move(cliques)),
      background_(std::move(background)),
      options_(options) {
  if (!graph_) throw Error(ErrorCode::kInvalidArgument, "session requires a graph");
  if (background_.num_vertices() != graph_->num_vertices() ||
      background_.directed() != graph_->directed()) {
    throw Error(ErrorCode::kInvalidArgument, "background shape does not match the graph");
  }
  for (CliqueId i = 0; i < cliques_.size(); ++i) {
    if (cliques_[i].id != i) {
      throw Error(ErrorCode::kInvalidArgument, "clique ids must be dense and ordered");
    }
  }
}

ExplorationSession ExplorationSession::create(std::string dataset_id,
                                              std::shared_ptr<const Graph> graph,
                                              std::vector<CliquePattern> cliques,
                                              FitOptions options) {
  if (!graph) throw Error(ErrorCode::kInvalidArgument, "session requires a graph");
  auto background = build_background(*graph, options);
  return ExplorationSession(std::move(dataset_id), std::move(graph), std::move(cliques),
                            std::move(background), options);
}

const CliquePattern& ExplorationSession::clique(CliqueId id) const {
  if (id >= cliques_.size()) {
    throw Error(ErrorCode::kNotFound, "unknown clique id " + std::to_string(id));
  }
  return cliques_[id];
}

bool ExplorationSession::scores_fresh() const noexcept {
  const auto epoch = background_.epoch();
  return std::all_of(cliques_.begin(), cliques_.end(), [epoch](const CliquePattern& c) {
    return c.score.has_value() && c.score_epoch == epoch;
  });
}

void ExplorationSession::refresh_scores() {
  const auto epoch = background_.epoch();
  std::vector<std::size_t> stale;
  for (std::size_t i = 0; i < cliques_.size(); ++i) {
    if (!cliques_[i].score || cliques_[i].score_epoch != epoch) stale.push_back(i);
  }
  std::vector<double> scores(stale.size());
  parallel_for(stale.size(), [&](std::size_t i) {
    scores[i] = interestingness(background_, *graph_, cliques_[stale[i]].vertices, options_);
  });
  for (std::size_t i = 0; i < stale.size(); ++i) {
    cliques_[stale[i]].score = scores[i];
    cliques_[stale[i]].score_epoch = epoch;
  }
}

void ExplorationSession::require_fresh() const {
  if (!scores_fresh()) {
    throw Error(ErrorCode::kConflict, "clique scores are stale for the current background");
  }
}

std::vector<RankedClique> ExplorationSession::rank_cliques() {
  refresh_scores();
  return std::as_const(*this).rank_cliques();
}

std::vector<RankedClique> ExplorationSession::rank_cliques() const {
  require_fresh();
  std::vector<RankedClique> ranked;
  ranked.reserve(cliques_.size());
  for (const auto& c : cliques_) ranked.push_back({c.id, *c.score});
  std::sort(ranked.begin(), ranked.end(), [](const RankedClique& a, const RankedClique& b) {
    return ranks_before(a.score, a.id, b.score, b.id);
  });
  return ranked;
}

std::vector<Candidate> ExplorationSession::candidate_cliques() {
  if (!chain_) throw Error(ErrorCode::kConflict, "no active chain");
  refresh_scores();
  return std::as_const(*this).candidate_cliques();
}

std::vector<Candidate> ExplorationSession::candidate_cliques() const {
  if (!chain_) throw Error(ErrorCode::kConflict, "no active chain");
  require_fresh();
  const auto& first = cliques_[chain_->front()].vertices;
  const auto& last = cliques_[chain_->back()].vertices;
  std::vector<Candidate> out;
  for (const auto& c : cliques_) {
    if (chain_->contains(c.id)) continue;
    if (auto shared = intersection(c.vertices, last); !shared.empty()) {
      out.push_back({c.id, *c.score, ChainEnd::kBack, std::move(shared)});
    } else if (auto front_shared = intersection(c.vertices, first); !front_shared.empty()) {
      out.push_back({c.id, *c.score, ChainEnd::kFront, std::move(front_shared)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return ranks_before(a.score, a.id, b.score, b.id);
  });
  return out;
}

void ExplorationSession::check_epoch(std::optional<std::uint64_t> expected_epoch) const {
  if (expected_epoch && *expected_epoch != background_.epoch()) {
    throw Error(ErrorCode::kConflict, "stale epoch " + std::to_string(*expected_epoch) +
                                          "; background is at epoch " +
                                          std::to_string(background_.epoch()));
  }
}

void ExplorationSession::start_chain(CliqueId id, std::optional<std::uint64_t> expected_epoch) {
  check_epoch(expected_epoch);
  if (chain_) throw Error(ErrorCode::kConflict, "a chain is already being explored");
  clique(id);
  chain_ = ChainPattern{{id}, {}};
}

void ExplorationSession::extend_chain(CliqueId id, std::optional<std::uint64_t> expected_epoch) {
  check_epoch(expected_epoch);
  if (!chain_) throw Error(ErrorCode::kConflict, "no active chain");
  const auto& candidate = clique(id);
  if (chain_->contains(id)) {
    throw Error(ErrorCode::kConflict, "clique " + std::to_string(id) + " is already in the chain");
  }
  const auto& last = cliques_[chain_->back()].vertices;
  const auto& first = cliques_[chain_->front()].vertices;
  if (intersects(candidate.vertices, last)) {
    attach(*chain_, id, candidate.vertices, last, ChainEnd::kBack);
  } else if (intersects(candidate.vertices, first)) {
    attach(*chain_, id, candidate.vertices, first, ChainEnd::kFront);
  } else {
    throw Error(ErrorCode::kConflict,
                "clique " + std::to_string(id) + " is not a candidate for the current chain");
  }
}

const FinalizedChain& ExplorationSession::finalize_chain(
    std::optional<std::uint64_t> expected_epoch) {
  check_epoch(expected_epoch);
  if (!chain_) throw Error(ErrorCode::kConflict, "no active chain");

  FinalizedChain done;
  done.chain = *chain_;
  done.score_epoch = background_.epoch();
  std::vector<VertexSet> sets;
  for (auto id : chain_->cliques) {
    const auto& c = cliques_[id];
    sets.push_back(c.vertices);
    done.scores.push_back(c.score && c.score_epoch == background_.epoch()
                              ? *c.score
                              : interestingness(background_, *graph_, c.vertices, options_));
  }
  auto updated = update_background(background_, *graph_, sets, options_);

  background_ = std::move(updated);
  done.background_epoch = background_.epoch();
  finalized_.push_back(std::move(done));
  chain_.reset();
  return finalized_.back();
}

void ExplorationSession::clear_chain() noexcept { chain_.reset(); }

MiningReport ExplorationSession::auto_mine(std::size_t k, double min_score) {
  if (chain_) throw Error(ErrorCode::kConflict, "cannot mine while a chain is being explored");
  MiningReport report;
  try {
    while (report.chains.size() < k) {
      const auto ranked = rank_cliques();
      if (ranked.empty() || ranked.front().score < min_score) break;
      start_chain(ranked.front().id);
      for (;;) {
        const auto candidates = candidate_cliques();
        if (candidates.empty() || candidates.front().score < min_score) break;
        extend_chain(candidates.front().id);
      }
      report.chains.push_back(finalize_chain());
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergence) throw;
    report.complete = false;
    report.diagnostic = e.what();
  }
  return report;
}

void ExplorationSession::restore(std::optional<ChainPattern> chain,
                                 std::vector<FinalizedChain> finalized) {
  if (chain && !is_well_formed(*chain, cliques_)) {
    throw Error(ErrorCode::kParse, "restored chain is not well formed");
  }
  for (const auto& f : finalized) {
    if (!is_well_formed(f.chain, cliques_)) {
      throw Error(ErrorCode::kParse, "restored chain is not well formed");
    }
  }
  chain_ = std::move(chain);
  finalized_ = std::move(finalized);
}

}  // namespace cliquechain
