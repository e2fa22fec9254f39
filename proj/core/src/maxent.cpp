#include "cliquechain/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cliquechain/error.hpp"

namespace cliquechain {
namespace {

const double kMaxLogOdds = std::log((1.0 - kEpsilon) / kEpsilon);

double clamp_probability(double p) noexcept { return std::clamp(p, kEpsilon, 1.0 - kEpsilon); }

double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double clamped_sigmoid(double x) noexcept {
  return clamp_probability(sigmoid(std::clamp(x, -kMaxLogOdds, kMaxLogOdds)));
}

// Slack for targets that sit on the achievable bound up to rounding.
constexpr double kTargetSlack = 1e-12;

constexpr int kSweepsBeforePolish = 30;
constexpr double kPolishTolerance = 1e-14;
constexpr int kPolishSteps = 12;

}  // namespace

// The edge variables a constraint touches, with the weight each contributes to
// the statistic: stat = weight * sum(p over pairs) / denominator.
class ConstraintScope {
 public:
  ConstraintScope(const EdgeProbabilityModel& m, const Constraint& c) {
    std::visit([&](const auto& k) { init(m, k); }, c);
  }

  double expectation(std::span<const double> probs) const noexcept {
    double sum = 0.0;
    for (auto i : pairs_) sum += probs[i];
    return weight_ * sum / denominator_;
  }

  double max_value() const noexcept {
    return weight_ * static_cast<double>(pairs_.size()) / denominator_;
  }

  const std::vector<std::size_t>& pairs() const noexcept { return pairs_; }
  double weight() const noexcept { return weight_; }
  double denominator() const noexcept { return denominator_; }

 private:
  void init(const EdgeProbabilityModel& m, const DegreeConstraint& c) {
    const auto n = m.num_vertices();
    if (c.vertex >= n) throw Error(ErrorCode::kInvalidArgument, "constraint vertex out of range");
    if ((c.direction == Direction::kUndirected) == m.directed()) {
      throw Error(ErrorCode::kInvalidArgument, "constraint direction does not match model kind");
    }
    pairs_.reserve(n > 0 ? n - 1 : 0);
    for (Vertex u = 0; u < n; ++u) {
      if (u == c.vertex) continue;
      pairs_.push_back(c.direction == Direction::kIn ? m.pair_index(u, c.vertex)
                                                     : m.pair_index(c.vertex, u));
    }
    weight_ = 1.0;
    denominator_ = static_cast<double>(n);
  }

  void init(const EdgeProbabilityModel& m, const DensityConstraint& c) {
    if (c.members.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "density constraint over an empty vertex set");
    }
    for (Vertex u : c.members) {
      if (u >= m.num_vertices()) {
        throw Error(ErrorCode::kInvalidArgument, "constraint vertex out of range");
      }
      for (Vertex v : c.members) {
        if (u == v) continue;
        if (m.directed() || u < v) pairs_.push_back(m.pair_index(u, v));
      }
    }
    // An undirected pair stands for both orientations.
    weight_ = m.directed() ? 1.0 : 2.0;
    const double k = static_cast<double>(c.members.size());
    denominator_ = k * k;
  }

  std::vector<std::size_t> pairs_;
  double weight_ = 1.0;
  double denominator_ = 1.0;
};

namespace {

void check_target(const ConstraintScope& scope, const Constraint& c) {
  const double target = target_of(c);
  if (!(target >= 0.0) || target > scope.max_value() + kTargetSlack) {
    std::ostringstream msg;
    msg << describe(c) << ": target outside achievable range [0, " << scope.max_value() << "]";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

// Log of the odds factor that makes the scope's expectation hit `target`
// exactly, accounting for the probability clamp.
// Pinned pairs keep their value and only contribute to the expectation.
double solve_log_factor(const ConstraintScope& scope, std::span<const double> probs,
                        double target, const std::vector<char>* pinned) {
  const auto& pairs = scope.pairs();
  const double scale = scope.weight() / scope.denominator();
  std::vector<double> log_odds;
  log_odds.reserve(pairs.size());
  double fixed = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  double highest = -lowest;
  for (auto i : pairs) {
    if (pinned && (*pinned)[i]) {
      fixed += probs[i];
      continue;
    }
    log_odds.push_back(logit(probs[i]));
    lowest = std::min(lowest, log_odds.back());
    highest = std::max(highest, log_odds.back());
  }
  if (log_odds.empty()) return 0.0;
  auto evaluate = [&](double t, double* slope) {
    double sum = fixed;
    double deriv = 0.0;
    for (double l : log_odds) {
      const double x = l + t;
      const double p = clamped_sigmoid(x);
      sum += p;
      if (x > -kMaxLogOdds && x < kMaxLogOdds) deriv += p * (1.0 - p);
    }
    if (slope) *slope = scale * deriv;
    return scale * sum - target;
  };

  double lo = -kMaxLogOdds - highest;  // every variable at kEpsilon
  double hi = kMaxLogOdds - lowest;    // every variable at 1 - kEpsilon
  if (evaluate(lo, nullptr) >= 0.0) return lo;
  if (evaluate(hi, nullptr) <= 0.0) return hi;

  const double h = scope.expectation(probs);
  const double cap = scope.max_value();
  double t = logit(std::clamp(target / cap, kEpsilon, 1.0 - kEpsilon)) -
             logit(std::clamp(h / cap, kEpsilon, 1.0 - kEpsilon));
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    double slope = 0.0;
    const double f = evaluate(t, &slope);
    if (std::abs(f) <= 1e-15 * std::max(1.0, target)) break;
    (f < 0.0 ? lo : hi) = t;
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(t))) break;
    double next = slope > 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

void apply_update(std::vector<double>& probs, const ConstraintScope& scope, const Constraint& c,
                  const FitOptions& options, const std::vector<char>* pinned = nullptr) {
  auto is_pinned = [&](std::size_t i) { return pinned && (*pinned)[i]; };
  const double target = target_of(c);
  const auto& pairs = scope.pairs();
  if (pairs.empty()) return;

  if (options.rule == StepRule::kClosedForm) {
    const double h = scope.expectation(probs);
    if (target <= 0.0 || target >= 1.0) {
      const double bound = target <= 0.0 ? kEpsilon : 1.0 - kEpsilon;
      for (auto i : pairs) {
        if (!is_pinned(i)) probs[i] = bound;
      }
      return;
    }
    const double x = std::pow(target * (1.0 - h) / (h * (1.0 - target)), options.damping);
    for (auto i : pairs) {
      if (is_pinned(i)) continue;
      const double p = probs[i];
      probs[i] = clamp_probability(x * p / (1.0 - (1.0 - x) * p));
    }
    return;
  }

  const double t = options.damping * solve_log_factor(scope, probs, target, pinned);
  for (auto i : pairs) {
    if (!is_pinned(i)) probs[i] = clamped_sigmoid(logit(probs[i]) + t);
  }
}

void check_options(const FitOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "damping must lie in (0, 1]");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  if (options.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
}

struct ScopedConstraint {
  const Constraint* constraint;
  ConstraintScope scope;
};

// Convex dual term for one clamped Bernoulli: its derivative is the clamped
// sigmoid, so it is softplus inside the clamp and linear outside.
double dual_term(double s) noexcept {
  auto softplus = [](double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); };
  if (s < -kMaxLogOdds) return softplus(-kMaxLogOdds) + kEpsilon * (s + kMaxLogOdds);
  if (s > kMaxLogOdds) return softplus(kMaxLogOdds) + (1.0 - kEpsilon) * (s - kMaxLogOdds);
  return softplus(s);
}

// Damped Newton on the dual of the clamped projection, with conjugate
// gradients on A D A^T. Iterative scaling crawls when the optimum pins pairs
// to the clamp (a path graph forces its end pair to zero), but because of the
// clamp the dual minimiser is finite and Newton reaches it in a few steps.
// Returns the number of Newton steps taken; stops at `budget` steps, when the
// residual is within tol, or when no descent step can be found.
int newton_polish(std::vector<double>& probs, const std::vector<ScopedConstraint>& order,
                  const std::vector<char>& pinned, double tol, int budget) {
  const std::size_t rows = order.size();
  std::vector<double> coef(rows), target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    coef[r] = order[r].scope.weight() / order[r].scope.denominator();
    target[r] = target_of(*order[r].constraint);
  }
  std::vector<std::size_t> touched;
  {
    std::vector<bool> seen(probs.size(), false);
    for (const auto& e : order) {
      for (auto i : e.scope.pairs()) {
        if (!seen[i] && !pinned[i]) touched.push_back(i);
        seen[i] = true;
      }
    }
  }
  std::vector<double> base(probs.size(), 0.0);
  for (auto i : touched) base[i] = logit(probs[i]);

  std::vector<double> delta(rows, 0.0), s(probs.size()), p(probs), curv(probs.size(), 0.0);
  // Fills s, p and curv for `d`; returns the dual objective.
  auto evaluate = [&](const std::vector<double>& d) {
    for (auto i : touched) s[i] = base[i];
    for (std::size_t r = 0; r < rows; ++r) {
      const double shift = coef[r] * d[r];
      for (auto i : order[r].scope.pairs()) s[i] += shift;  // pinned entries are never read
    }
    double value = 0.0;
    for (auto i : touched) {
      p[i] = clamped_sigmoid(s[i]);
      curv[i] = (s[i] > -kMaxLogOdds && s[i] < kMaxLogOdds) ? p[i] * (1.0 - p[i]) : 0.0;
      value += dual_term(s[i]);
    }
    for (std::size_t r = 0; r < rows; ++r) value -= d[r] * target[r];
    return value;
  };
  auto gradient = [&](std::vector<double>& g) {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (auto i : order[r].scope.pairs()) sum += p[i];
      g[r] = coef[r] * sum - target[r];
      worst = std::max(worst, std::abs(g[r]));
    }
    return worst;
  };

  std::vector<double> grad(rows), step(rows), trial(rows), scatter(probs.size());
  std::vector<double> diag(rows), res(rows), z(rows), dir(rows), hd(rows);
  double value = evaluate(delta);
  double residual = gradient(grad);
  int steps = 0;
  // When the targets are only reachable up to the clamp the dual is
  // unbounded below and late steps can wander off; keep the best point seen.
  auto best = delta;
  double best_residual = residual;
  int stalled = 0;

  auto hessian_times = [&](const std::vector<double>& v, std::vector<double>& out, double ridge) {
    for (auto i : touched) scatter[i] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      for (auto i : order[r].scope.pairs()) scatter[i] += coef[r] * v[r];
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (auto i : order[r].scope.pairs()) sum += curv[i] * scatter[i];
      out[r] = coef[r] * sum + ridge * v[r];
    }
  };

  while (residual > tol && steps < budget) {
    double max_diag = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (auto i : order[r].scope.pairs()) sum += curv[i];
      diag[r] = coef[r] * coef[r] * sum;
      max_diag = std::max(max_diag, diag[r]);
    }
    const double ridge = 1e-12 * std::max(max_diag, 1e-300) + 1e-300;

    // Preconditioned CG for H step = -grad.
    std::fill(step.begin(), step.end(), 0.0);
    double rz = 0.0, grad_norm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      res[r] = -grad[r];
      z[r] = res[r] / (diag[r] + ridge);
      dir[r] = z[r];
      rz += res[r] * z[r];
      grad_norm += grad[r] * grad[r];
    }
    const std::size_t cg_limit = std::max<std::size_t>(50, 2 * rows);
    for (std::size_t it = 0; it < cg_limit && rz > 0.0; ++it) {
      hessian_times(dir, hd, ridge);
      double dhd = 0.0;
      for (std::size_t r = 0; r < rows; ++r) dhd += dir[r] * hd[r];
      if (!(dhd > 0.0)) break;
      const double alpha = rz / dhd;
      double res_norm = 0.0, rz_next = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        step[r] += alpha * dir[r];
        res[r] -= alpha * hd[r];
        res_norm += res[r] * res[r];
      }
      if (res_norm <= 1e-24 * grad_norm) break;
      for (std::size_t r = 0; r < rows; ++r) {
        z[r] = res[r] / (diag[r] + ridge);
        rz_next += res[r] * z[r];
      }
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t r = 0; r < rows; ++r) dir[r] = z[r] + beta * dir[r];
    }

    double slope = 0.0;
    for (std::size_t r = 0; r < rows; ++r) slope += grad[r] * step[r];
    if (!(slope < 0.0)) {
      // Not a descent direction (CG broke down); fall back to steepest descent.
      for (std::size_t r = 0; r < rows; ++r) step[r] = -grad[r] / (diag[r] + ridge);
      slope = 0.0;
      for (std::size_t r = 0; r < rows; ++r) slope += grad[r] * step[r];
    }

    bool accepted = false;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      for (std::size_t r = 0; r < rows; ++r) trial[r] = delta[r] + t * step[r];
      const double next_value = evaluate(trial);
      std::vector<double> next_grad(rows);
      const double next_residual = gradient(next_grad);
      if (next_value <= value + 1e-4 * t * slope || next_residual < residual) {
        delta.swap(trial);
        grad.swap(next_grad);
        value = next_value;
        residual = next_residual;
        accepted = true;
        break;
      }
    }
    ++steps;
    if (!accepted) break;
    if (residual < 0.5 * best_residual) {
      stalled = 0;
    } else if (++stalled >= 3) {
      break;
    }
    if (residual < best_residual) {
      best = delta;
      best_residual = residual;
    }
  }
  evaluate(best);
  for (auto i : touched) probs[i] = p[i];
  return steps;
}

int sweep_rank(const Constraint& c) {
  if (const auto* d = std::get_if<DegreeConstraint>(&c)) {
    switch (d->direction) {
      case Direction::kIn: return 0;
      case Direction::kOut: return 1;
      case Direction::kUndirected: return 2;
    }
  }
  return 3;
}

}  // namespace

double target_of(const Constraint& c) noexcept {
  return std::visit([](const auto& k) { return k.target; }, c);
}

std::string describe(const Constraint& c) {
  std::ostringstream out;
  out.precision(17);
  if (const auto* d = std::get_if<DegreeConstraint>(&c)) {
    out << "degree(" << d->vertex << ", " << to_string(d->direction) << ") = " << d->target;
  } else {
    const auto& s = std::get<DensityConstraint>(c);
    out << "density({";
    bool first = true;
    for (Vertex v : s.members) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    out << "}) = " << s.target;
  }
  return out.str();
}

EdgeProbabilityModel::EdgeProbabilityModel(std::size_t n, bool directed)
    : n_(n), directed_(directed) {
  const std::size_t pairs = directed ? n * (n > 0 ? n - 1 : 0) : n * (n > 0 ? n - 1 : 0) / 2;
  probs_.assign(pairs, 0.5);
}

EdgeProbabilityModel EdgeProbabilityModel::uniform(std::size_t n, bool directed) {
  return EdgeProbabilityModel(n, directed);
}

EdgeProbabilityModel EdgeProbabilityModel::from_parts(std::size_t n, bool directed,
                                                      std::uint64_t epoch,
                                                      std::vector<Constraint> constraint_log,
                                                      std::vector<double> probabilities) {
  EdgeProbabilityModel m(n, directed);
  if (probabilities.size() != m.probs_.size()) {
    throw Error(ErrorCode::kParse, "model has " + std::to_string(probabilities.size()) +
                                       " probabilities, expected " +
                                       std::to_string(m.probs_.size()));
  }
  for (double p : probabilities) {
    if (!(p >= kEpsilon && p <= 1.0 - kEpsilon)) {
      throw Error(ErrorCode::kParse, "model probability outside [epsilon, 1 - epsilon]");
    }
  }
  for (const auto& c : constraint_log) check_target(ConstraintScope(m, c), c);
  m.probs_ = std::move(probabilities);
  m.log_ = std::move(constraint_log);
  m.epoch_ = epoch;
  return m;
}

std::size_t EdgeProbabilityModel::pair_index(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) throw Error(ErrorCode::kInvalidArgument, "vertex index out of range");
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "self-pairs are not modelled");
  if (directed_) return static_cast<std::size_t>(u) * (n_ - 1) + (v < u ? v : v - 1);
  if (u > v) std::swap(u, v);
  const std::size_t a = u;
  return a * n_ - a * (a + 1) / 2 + (v - a - 1);
}

std::pair<Vertex, Vertex> EdgeProbabilityModel::pair_at(std::size_t index) const {
  if (index >= probs_.size()) throw Error(ErrorCode::kInvalidArgument, "pair index out of range");
  if (directed_) {
    const auto u = static_cast<Vertex>(index / (n_ - 1));
    auto v = static_cast<Vertex>(index % (n_ - 1));
    if (v >= u) ++v;
    return {u, v};
  }
  Vertex u = 0;
  std::size_t row = n_ - 1;
  while (index >= row) {
    index -= row;
    ++u;
    --row;
  }
  return {u, static_cast<Vertex>(u + 1 + index)};
}

double EdgeProbabilityModel::log_odds(Vertex u, Vertex v) const {
  return logit(probability(u, v));
}

EdgeProbabilityModel init_uniform_model(const Graph& g) {
  return EdgeProbabilityModel::uniform(g.num_vertices(), g.directed());
}

double expected_degree(const EdgeProbabilityModel& m, Vertex v, Direction direction) {
  return expectation(m, DegreeConstraint{v, direction, 0.0});
}

double expected_density(const EdgeProbabilityModel& m, const VertexSet& s) {
  return expectation(m, DensityConstraint{s, 0.0});
}

double expectation(const EdgeProbabilityModel& m, const Constraint& c) {
  return ConstraintScope(m, c).expectation(m.probabilities());
}

double achievable_max(const EdgeProbabilityModel& m, const Constraint& c) {
  return ConstraintScope(m, c).max_value();
}

EdgeProbabilityModel is_update_constraint(const EdgeProbabilityModel& m, const Constraint& c,
                                          const FitOptions& options) {
  check_options(options);
  const ConstraintScope scope(m, c);
  check_target(scope, c);
  EdgeProbabilityModel next = m;
  apply_update(next.probs_, scope, c, options);
  return next;
}

double effective_tolerance(const EdgeProbabilityModel& m, double tol) noexcept {
  return std::max(tol, 10.0 * kEpsilon * static_cast<double>(m.num_vertices()));
}

double max_residual(const EdgeProbabilityModel& m, const std::vector<Constraint>& constraints) {
  double worst = 0.0;
  for (const auto& c : constraints) {
    worst = std::max(worst, std::abs(expectation(m, c) - target_of(c)));
  }
  return worst;
}

FitResult fit(const EdgeProbabilityModel& m, const std::vector<Constraint>& constraints,
              const FitOptions& options) {
  check_options(options);

  std::vector<Constraint> combined = m.log_;
  for (const auto& c : constraints) {
    if (std::find(combined.begin(), combined.end(), c) == combined.end()) combined.push_back(c);
  }

  std::vector<ScopedConstraint> order;
  order.reserve(combined.size());
  for (const auto& c : combined) {
    ConstraintScope scope(m, c);
    check_target(scope, c);
    order.push_back(ScopedConstraint{&c, std::move(scope)});
  }
  std::stable_sort(order.begin(), order.end(), [](const ScopedConstraint& a, const ScopedConstraint& b) {
    const auto* da = std::get_if<DegreeConstraint>(a.constraint);
    const auto* db = std::get_if<DegreeConstraint>(b.constraint);
    if (da && db) {
      if (da->vertex != db->vertex) return da->vertex < db->vertex;
      return sweep_rank(*a.constraint) < sweep_rank(*b.constraint);
    }
    return da && !db;
  });

  FitResult result{m, order.empty(), 0, 0.0, std::nullopt};
  auto& probs = result.model.probs_;
  const double tol = effective_tolerance(m, options.tol);

  // A target at either end of its range can only be met with every pair of
  // the scope on the clamp; pin those pairs so no other update moves them.
  std::vector<char> pinned(probs.size(), 0);
  for (const auto& e : order) {
    const double target = target_of(*e.constraint);
    const double top = e.scope.max_value();
    double bound = -1.0;
    if (target <= kTargetSlack) bound = kEpsilon;
    else if (target >= top - kTargetSlack) bound = 1.0 - kEpsilon;
    if (bound < 0.0) continue;
    for (auto i : e.scope.pairs()) {
      probs[i] = bound;
      pinned[i] = 1;
    }
  }
  auto measure = [&] {
    result.residual = 0.0;
    for (const auto& e : order) {
      const double r = std::abs(e.scope.expectation(probs) - target_of(*e.constraint));
      if (r >= result.residual) {
        result.residual = r;
        result.worst = *e.constraint;
      }
    }
    return result.residual <= tol;
  };

  bool polished = false;
  while (!order.empty() && result.iterations < options.max_iter) {
    ++result.iterations;
    for (const auto& e : order) apply_update(probs, e.scope, *e.constraint, options, &pinned);
    if (measure()) {
      result.converged = true;
      break;
    }
    // Scaling that has not settled after this many sweeps is usually heading
    // for the clamp; finish with Newton steps (each counts as an iteration).
    if (!polished && result.iterations >= kSweepsBeforePolish) {
      polished = true;
      result.iterations += newton_polish(probs, order, pinned, tol, options.max_iter - result.iterations);
      if (measure()) {
        result.converged = true;
        break;
      }
    }
  }

  if (result.converged && !order.empty()) {
    // Tighten well past tol. Pairs close to the clamp carry most of the KL
    // mass, so leftover slack there shows up as spurious interestingness when
    // the model is refitted later. Does not count against max_iter.
    const auto before = probs;
    const auto worst = result.worst;
    const double residual = result.residual;
    newton_polish(probs, order, pinned, kPolishTolerance, kPolishSteps);
    if (!measure()) {
      probs = before;
      result.residual = residual;
      result.worst = worst;
    }
  }

  if (result.converged) {
    result.model.log_ = std::move(combined);
    ++result.model.epoch_;
  }
  return result;
}

double entropy(const EdgeProbabilityModel& m) {
  double total = 0.0;
  for (double p : m.probabilities()) total -= p * std::log(p) + (1.0 - p) * std::log1p(-p);
  return total;
}

double kl_divergence(const EdgeProbabilityModel& p, const EdgeProbabilityModel& q) {
  if (!p.same_shape(q)) {
    throw Error(ErrorCode::kInvalidArgument, "KL divergence between models of different shape");
  }
  const auto a = p.probabilities();
  const auto b = q.probabilities();
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    total += a[i] * std::log(a[i] / b[i]) + (1.0 - a[i]) * std::log((1.0 - a[i]) / (1.0 - b[i]));
  }
  return std::max(total, 0.0);
}

}  // namespace cliquechain
