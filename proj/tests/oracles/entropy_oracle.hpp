#pragma once

// Direct numerical entropy maximization over the edge-probability vector:
// maximize sum_e H(p_e) subject to A p = b and eps <= p_e <= 1 - eps, by
// projected gradient ascent with an exact line search. The constraint rows
// are built here from the statistic definitions, independently of the
// library's update code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cliquechain/maxent.hpp"

namespace cliquechain::testkit {

struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

inline LinearSystem linear_system(const EdgeProbabilityModel& shape,
                                  const std::vector<Constraint>& constraints) {
  const auto n = static_cast<double>(shape.num_vertices());
  const auto m = static_cast<Eigen::Index>(shape.num_pairs());
  LinearSystem sys{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(constraints.size()), m),
                   Eigen::VectorXd::Zero(static_cast<Eigen::Index>(constraints.size()))};
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    if (const auto* d = std::get_if<DegreeConstraint>(&constraints[r])) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto [u, v] = shape.pair_at(static_cast<std::size_t>(i));
        bool in_scope = false;
        switch (d->direction) {
          case Direction::kOut: in_scope = u == d->vertex; break;
          case Direction::kIn: in_scope = v == d->vertex; break;
          case Direction::kUndirected: in_scope = u == d->vertex || v == d->vertex; break;
        }
        if (in_scope) sys.A(row, i) = 1.0 / n;
      }
      sys.b(row) = d->target;
    } else {
      const auto& s = std::get<DensityConstraint>(constraints[r]);
      const auto k = static_cast<double>(s.members.size());
      const double weight = shape.directed() ? 1.0 : 2.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto [u, v] = shape.pair_at(static_cast<std::size_t>(i));
        if (s.members.contains(u) && s.members.contains(v)) sys.A(row, i) = weight / (k * k);
      }
      sys.b(row) = s.target;
    }
  }
  return sys;
}

struct OracleResult {
  Eigen::VectorXd p;
  int iterations = 0;
  double constraint_error = 0.0;  // max |A p - b|
};

// `start` must be feasible (for example the adjacency vector of the graph the
// targets were read from); it is clipped into the box first.
inline OracleResult max_entropy_oracle(const LinearSystem& sys, Eigen::VectorXd start,
                                       int max_iter = 20000) {
  constexpr double lo = kEpsilon;
  constexpr double hi = 1.0 - kEpsilon;
  constexpr double at_bound = 1e-12;
  Eigen::VectorXd p = start.cwiseMax(lo).cwiseMin(hi);
  const auto m = p.size();

  auto gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(((1.0 - x.array()) / x.array()).log());
  };

  // Gradient projected onto {d : A_F d = 0, d_i = 0 outside F}.
  auto project = [&](const Eigen::VectorXd& g, const std::vector<bool>& free) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (free[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
    if (idx.empty()) return d;
    Eigen::MatrixXd AF(sys.A.rows(), static_cast<Eigen::Index>(idx.size()));
    Eigen::VectorXd gF(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      AF.col(static_cast<Eigen::Index>(j)) = sys.A.col(idx[j]);
      gF(static_cast<Eigen::Index>(j)) = g(idx[j]);
    }
    if (AF.rows() > 0) {
      const Eigen::MatrixXd pinv = AF.completeOrthogonalDecomposition().pseudoInverse();
      gF -= pinv * (AF * gF);
    }
    for (std::size_t j = 0; j < idx.size(); ++j) d(idx[j]) = gF(static_cast<Eigen::Index>(j));
    return d;
  };

  OracleResult result;
  for (result.iterations = 0; result.iterations < max_iter; ++result.iterations) {
    const Eigen::VectorXd g = gradient(p);
    std::vector<bool> free(static_cast<std::size_t>(m), true);
    Eigen::VectorXd d;
    for (;;) {
      d = project(g, free);
      bool changed = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        auto f = free[static_cast<std::size_t>(i)];
        if (!f) continue;
        if ((p(i) <= lo + at_bound && d(i) < 0) || (p(i) >= hi - at_bound && d(i) > 0)) {
          f = false;
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (d.lpNorm<Eigen::Infinity>() < 1e-13) break;

    double t_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (d(i) > 0) t_max = std::min(t_max, (hi - p(i)) / d(i));
      if (d(i) < 0) t_max = std::min(t_max, (lo - p(i)) / d(i));
    }
    // phi'(t) = grad H(p + t d) . d is decreasing in t because H is concave.
    auto slope = [&](double t) {
      const Eigen::VectorXd x = (p + t * d).cwiseMax(lo).cwiseMin(hi);
      return gradient(x).dot(d);
    };
    double t = t_max;
    if (slope(t_max) < 0) {
      double a = 0.0, c = t_max;
      for (int k = 0; k < 200 && c - a > 1e-18 * std::max(1.0, c); ++k) {
        const double mid = 0.5 * (a + c);
        (slope(mid) > 0 ? a : c) = mid;
      }
      t = 0.5 * (a + c);
    }
    const Eigen::VectorXd next = (p + t * d).cwiseMax(lo).cwiseMin(hi);
    const double moved = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    if (moved < 1e-15) break;
  }
  result.p = p;
  result.constraint_error = sys.A.rows() ? (sys.A * p - sys.b).lpNorm<Eigen::Infinity>() : 0.0;
  return result;
}

}  // namespace cliquechain::testkit
