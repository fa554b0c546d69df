#include "ipiag/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ipiag {

CompositeProblem::CompositeProblem(ProblemOracles oracles, ProblemMetadata metadata)
    : oracles_(std::move(oracles)), meta_(std::move(metadata)) {
  require(meta_.dimension >= 1, "problem: dimension must be >= 1");
  require(meta_.num_components >= 1, "problem: num_components must be >= 1");
  require(static_cast<Index>(meta_.component_lipschitz.size()) == meta_.num_components,
          "problem: component_lipschitz must have num_components entries");
  for (double l : meta_.component_lipschitz) {
    require(l > 0.0 && std::isfinite(l), "problem: component Lipschitz constants must be positive");
  }
  if (meta_.growth_constant) {
    require(*meta_.growth_constant > 0.0 && std::isfinite(*meta_.growth_constant),
            "problem: growth constant must be positive");
  }
  require(static_cast<bool>(oracles_.component_gradient), "problem: missing component_gradient");
  require(static_cast<bool>(oracles_.smooth_value), "problem: missing smooth_value");
  require(static_cast<bool>(oracles_.regularizer_value), "problem: missing regularizer_value");
  require(static_cast<bool>(oracles_.prox), "problem: missing prox");

  total_lipschitz_ =
      std::accumulate(meta_.component_lipschitz.begin(), meta_.component_lipschitz.end(), 0.0);
  if (meta_.declared_total_lipschitz) {
    const double declared = *meta_.declared_total_lipschitz;
    require(std::abs(declared - total_lipschitz_) <= 1e-12 * total_lipschitz_,
            "problem: total Lipschitz constant differs from the sum of component constants");
  }
  if (meta_.known_optimum) {
    require_dimension(meta_.known_optimum->point, meta_.dimension, "problem: known optimum");
  }
  if (meta_.regularizer) meta_.regularizer->validate();
}

void CompositeProblem::add_component_gradient(Index n, const Vector& x, Vector& out) const {
  require(n >= 0 && n < meta_.num_components, "component index out of range");
  oracles_.component_gradient(n, x, out);
}

void CompositeProblem::add_block_gradient(Index first, Index last, const Vector& x,
                                          Vector& out) const {
  require(0 <= first && first <= last && last <= meta_.num_components, "block out of range");
  if (oracles_.block_gradient) {
    oracles_.block_gradient(first, last, x, out);
    return;
  }
  for (Index n = first; n < last; ++n) oracles_.component_gradient(n, x, out);
}

Vector CompositeProblem::component_gradient(Index n, const Vector& x) const {
  require_dimension(x, meta_.dimension, "component_gradient");
  Vector out = Vector::Zero(meta_.dimension);
  add_component_gradient(n, x, out);
  return out;
}

double CompositeProblem::smooth_value(const Vector& x) const {
  require_dimension(x, meta_.dimension, "smooth_value");
  return oracles_.smooth_value(x);
}

double CompositeProblem::regularizer_value(const Vector& x) const {
  require_dimension(x, meta_.dimension, "regularizer_value");
  return oracles_.regularizer_value(x);
}

void CompositeProblem::prox(const Vector& v, double alpha, Vector& out) const {
  require(alpha > 0.0, "prox: alpha must be positive");
  oracles_.prox(v, alpha, out);
}

Vector CompositeProblem::prox(const Vector& v, double alpha) const {
  require_dimension(v, meta_.dimension, "prox");
  Vector out(v.size());
  prox(v, alpha, out);
  return out;
}

CompositeProblem CompositeProblem::with_known_optimum(KnownOptimum optimum) const {
  ProblemMetadata meta = meta_;
  meta.known_optimum = std::move(optimum);
  return CompositeProblem(oracles_, std::move(meta));
}

CompositeProblem CompositeProblem::with_growth_constant(double beta) const {
  ProblemMetadata meta = meta_;
  meta.growth_constant = beta;
  return CompositeProblem(oracles_, std::move(meta));
}

double evaluate_objective(const CompositeProblem& problem, const Vector& x) {
  const double h = problem.regularizer_value(x);
  if (std::isinf(h) && h > 0) return std::numeric_limits<double>::infinity();
  return problem.smooth_value(x) + h;
}

Vector full_gradient(const CompositeProblem& problem, const Vector& x) {
  require_dimension(x, problem.dimension(), "full_gradient");
  Vector g = Vector::Zero(problem.dimension());
  problem.add_block_gradient(0, problem.num_components(), x, g);
  return g;
}

double gradient_consistency_check(const CompositeProblem& problem, const Vector& x, double step) {
  require(step > 0.0, "gradient_consistency_check: step must be positive");
  const Vector g = full_gradient(problem, x);
  Vector probe = x;
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = problem.smooth_value(probe);
    probe[i] = x[i] - step;
    const double down = problem.smooth_value(probe);
    probe[i] = x[i];
    worst = std::max(worst, std::abs((up - down) / (2.0 * step) - g[i]));
  }
  return worst / (1.0 + g.lpNorm<Eigen::Infinity>());
}

double lipschitz_ratio(const CompositeProblem& problem, Index n, const Vector& x, const Vector& y) {
  const double gap = (x - y).norm();
  if (gap == 0.0) return 0.0;
  const Vector diff = problem.component_gradient(n, x) - problem.component_gradient(n, y);
  return diff.norm() / (problem.component_lipschitz()[static_cast<std::size_t>(n)] * gap);
}

}  // namespace ipiag
