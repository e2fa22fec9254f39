#pragma once

#include <vector>

#include "cliquechain/graph.hpp"
#include "cliquechain/maxent.hpp"

namespace cliquechain {

// One degree constraint per vertex (in and out for directed graphs) with the
// observed normalized degrees as targets.
std::vector<Constraint> degree_constraints(const Graph& g);

DensityConstraint observed_density_constraint(const Graph& g, const VertexSet& s);

// Uniform model fitted to the observed vertex degrees, at epoch 0. Throws
// kNonConvergence.
EdgeProbabilityModel build_background(const Graph& g, const FitOptions& options = {});

// KL(p_s || background), where p_s is the background refitted with one extra
// density constraint pinning s at its observed density. The background is
// not modified. Throws kNonConvergence.
double interestingness(const EdgeProbabilityModel& background, const Graph& g, const VertexSet& s,
                       const FitOptions& options = {});

// Folds one observed-density constraint per vertex set into the background
// and refits. The epoch always advances, even for an empty list. Throws
// kNonConvergence, leaving the input untouched.
EdgeProbabilityModel update_background(const EdgeProbabilityModel& background, const Graph& g,
                                       const std::vector<VertexSet>& sets,
                                       const FitOptions& options = {});

}  // namespace cliquechain
