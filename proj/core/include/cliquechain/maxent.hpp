#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cliquechain/graph.hpp"

namespace cliquechain {

// Every stored edge probability is kept inside [kEpsilon, 1 - kEpsilon].
inline constexpr double kEpsilon = 1e-9;

struct DegreeConstraint {
  Vertex vertex = 0;
  Direction direction = Direction::kUndirected;
  double target = 0.0;  // normalized degree in [0, 1]

  friend bool operator==(const DegreeConstraint&, const DegreeConstraint&) = default;
};

struct DensityConstraint {
  VertexSet members;
  double target = 0.0;  // |E'| / |V'|^2 with ordered-pair bookkeeping

  friend bool operator==(const DensityConstraint&, const DensityConstraint&) = default;
};

using Constraint = std::variant<DegreeConstraint, DensityConstraint>;

double target_of(const Constraint& c) noexcept;
std::string describe(const Constraint& c);

// How the multiplicative odds factor x of one Iterative Scaling update is chosen.
enum class StepRule {
  // x solves E_p'[stat] = target exactly for the constraint being updated.
  kExactSolve,
  // x = t(1 - h) / (h(1 - t)), which is exact only when every edge variable in
  // the constraint's scope shares the same probability and the statistic can
  // reach 1.
  kClosedForm,
};

struct FitOptions {
  double tol = 1e-6;
  int max_iter = 1000;
  StepRule rule = StepRule::kExactSolve;
  // Exponent applied to x; values below 1 damp each update.
  double damping = 1.0;
};

struct FitResult;

// Factorized maximum-entropy distribution over graphs on n vertices: one
// independent Bernoulli variable per admissible vertex pair (ordered pairs
// u != v when directed, unordered pairs otherwise).
class EdgeProbabilityModel {
 public:
  static EdgeProbabilityModel uniform(std::size_t n, bool directed);

  // Rebuilds a model from stored state, validating shape and ranges.
  static EdgeProbabilityModel from_parts(std::size_t n, bool directed, std::uint64_t epoch,
                                         std::vector<Constraint> constraint_log,
                                         std::vector<double> probabilities);

  std::size_t num_vertices() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  std::size_t num_pairs() const noexcept { return probs_.size(); }
  std::uint64_t epoch() const noexcept { return epoch_; }
  const std::vector<Constraint>& constraint_log() const noexcept { return log_; }

  // Canonical pair numbering: directed pairs in row-major order skipping the
  // diagonal; undirected pairs (u < v) in row-major upper-triangular order.
  std::size_t pair_index(Vertex u, Vertex v) const;
  std::pair<Vertex, Vertex> pair_at(std::size_t index) const;

  double probability(Vertex u, Vertex v) const { return probs_[pair_index(u, v)]; }
  // Read-only view of the natural parameter of each edge variable.
  double log_odds(Vertex u, Vertex v) const;
  std::span<const double> probabilities() const noexcept { return probs_; }

  bool same_shape(const EdgeProbabilityModel& other) const noexcept {
    return n_ == other.n_ && directed_ == other.directed_;
  }

  void bump_epoch() noexcept { ++epoch_; }

  friend bool operator==(const EdgeProbabilityModel&, const EdgeProbabilityModel&) = default;

 private:
  friend class ConstraintScope;
  friend EdgeProbabilityModel is_update_constraint(const EdgeProbabilityModel&, const Constraint&,
                                                   const FitOptions&);
  friend FitResult fit(const EdgeProbabilityModel&, const std::vector<Constraint>&,
                       const FitOptions&);

  EdgeProbabilityModel(std::size_t n, bool directed);

  std::size_t n_ = 0;
  bool directed_ = false;
  std::uint64_t epoch_ = 0;
  std::vector<Constraint> log_;
  std::vector<double> probs_;
};

struct FitResult {
  EdgeProbabilityModel model;
  bool converged = false;
  int iterations = 0;
  // Largest |E[stat] - target| over the fitted constraints after the last sweep.
  double residual = 0.0;
  std::optional<Constraint> worst;
};

EdgeProbabilityModel init_uniform_model(const Graph& g);

double expected_degree(const EdgeProbabilityModel& m, Vertex v, Direction direction);
double expected_density(const EdgeProbabilityModel& m, const VertexSet& s);
double expectation(const EdgeProbabilityModel& m, const Constraint& c);
// Largest value the constraint's statistic can take without self-loops.
double achievable_max(const EdgeProbabilityModel& m, const Constraint& c);

// One Iterative Scaling update: every edge variable in the constraint's scope
// has its odds multiplied by x; all other variables are left alone.
EdgeProbabilityModel is_update_constraint(const EdgeProbabilityModel& m, const Constraint& c,
                                          const FitOptions& options = {});

// Sweeps the model's logged constraints plus `constraints` (degree constraints
// by vertex first, then density constraints in insertion order) until every
// residual is within max(tol, 10 * kEpsilon * n). On success the new
// constraints are appended to the log and the epoch is bumped; otherwise the
// last iterate is returned with converged == false and log/epoch untouched.
FitResult fit(const EdgeProbabilityModel& m, const std::vector<Constraint>& constraints,
              const FitOptions& options = {});

double effective_tolerance(const EdgeProbabilityModel& m, double tol) noexcept;
double max_residual(const EdgeProbabilityModel& m, const std::vector<Constraint>& constraints);

// Sum of per-edge Bernoulli entropies, in nats.
double entropy(const EdgeProbabilityModel& m);

// KL(p || q) over the graph space, in nats.
double kl_divergence(const EdgeProbabilityModel& p, const EdgeProbabilityModel& q);

}  // namespace cliquechain
