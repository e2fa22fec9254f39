#include "cliquechain/interestingness.hpp"

#include <sstream>

#include "cliquechain/error.hpp"

namespace cliquechain {
namespace {

void check_shape(const EdgeProbabilityModel& m, const Graph& g) {
  if (m.num_vertices() != g.num_vertices() || m.directed() != g.directed()) {
    throw Error(ErrorCode::kInvalidArgument, "model shape does not match the graph");
  }
}

EdgeProbabilityModel require_converged(FitResult result, const char* what) {
  if (!result.converged) {
    std::ostringstream msg;
    msg.precision(6);
    msg << what << " did not converge after " << result.iterations
        << " sweeps; worst residual " << result.residual;
    if (result.worst) msg << " on " << describe(*result.worst);
    throw Error(ErrorCode::kNonConvergence, msg.str());
  }
  return std::move(result.model);
}

}  // namespace

std::vector<Constraint> degree_constraints(const Graph& g) {
  std::vector<Constraint> constraints;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.directed()) {
      constraints.emplace_back(
          DegreeConstraint{v, Direction::kIn, normalized_degree(g, v, Direction::kIn)});
      constraints.emplace_back(
          DegreeConstraint{v, Direction::kOut, normalized_degree(g, v, Direction::kOut)});
    } else {
      constraints.emplace_back(DegreeConstraint{
          v, Direction::kUndirected, normalized_degree(g, v, Direction::kUndirected)});
    }
  }
  return constraints;
}

DensityConstraint observed_density_constraint(const Graph& g, const VertexSet& s) {
  return DensityConstraint{s, subgraph_density(g, s)};
}

EdgeProbabilityModel build_background(const Graph& g, const FitOptions& options) {
  auto fitted = require_converged(fit(init_uniform_model(g), degree_constraints(g), options),
                                  "background fit");
  // The degree background is the base version every session starts from.
  return EdgeProbabilityModel::from_parts(fitted.num_vertices(), fitted.directed(), 0,
                                          fitted.constraint_log(),
                                          {fitted.probabilities().begin(), fitted.probabilities().end()});
}

double interestingness(const EdgeProbabilityModel& background, const Graph& g, const VertexSet& s,
                       const FitOptions& options) {
  check_shape(background, g);
  auto with_pattern = require_converged(
      fit(background, {observed_density_constraint(g, s)}, options), "pattern model fit");
  return kl_divergence(with_pattern, background);
}

EdgeProbabilityModel update_background(const EdgeProbabilityModel& background, const Graph& g,
                                       const std::vector<VertexSet>& sets,
                                       const FitOptions& options) {
  check_shape(background, g);
  if (sets.empty()) {
    auto next = background;
    next.bump_epoch();
    return next;
  }
  std::vector<Constraint> constraints;
  constraints.reserve(sets.size());
  for (const auto& s : sets) constraints.emplace_back(observed_density_constraint(g, s));
  return require_converged(fit(background, constraints, options), "background update");
}

}  // namespace cliquechain
