#pragma once

#include <vector>

#include "ipiag/core.hpp"
#include "ipiag/random.hpp"

namespace ipiag::testing {

// F(x) = sum_n 1/2 w_n ||x - t_n||^2 with component weights w_n and targets t_n,
// plus the separable regularizer `reg`. Hessian = (sum w_n) I.
inline CompositeProblem weighted_quadratic(std::vector<double> weights, std::vector<Vector> targets,
                                           ProxSpec reg = {}) {
  const auto d = targets.front().size();
  ProblemOracles o;
  o.component_gradient = [weights, targets](Index n, const Vector& x, Vector& out) {
    const auto i = static_cast<std::size_t>(n);
    out += weights[i] * (x - targets[i]);
  };
  o.smooth_value = [weights, targets](const Vector& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) f += 0.5 * weights[i] * (x - targets[i]).squaredNorm();
    return f;
  };
  o.regularizer_value = [reg](const Vector& x) { return regularizer_value(reg, x); };
  o.prox = [reg](const Vector& v, double alpha, Vector& out) { apply_prox(reg, v, alpha, out); };
  ProblemMetadata meta;
  meta.dimension = d;
  meta.num_components = static_cast<Index>(weights.size());
  meta.component_lipschitz = weights;
  double total = 0.0;
  for (double w : weights) total += w;
  meta.growth_constant = total;
  meta.regularizer = reg;
  meta.generator.name = "test_quadratic";
  return CompositeProblem(std::move(o), std::move(meta));
}

// F(x) = 1/2 ||x||^2 as a single component.
inline CompositeProblem half_norm_squared(Index d, ProxSpec reg = {}) {
  return weighted_quadratic({1.0}, {Vector::Zero(d)}, reg);
}

// N random components in dimension d, weights in [0.5, 2], targets in [-2, 2]^d.
inline CompositeProblem random_quadratic(Index N, Index d, std::uint64_t seed, ProxSpec reg = {}) {
  SplitMix64 rng(seed);
  std::vector<double> w;
  std::vector<Vector> t;
  for (Index n = 0; n < N; ++n) {
    w.push_back(0.5 + 1.5 * rng.uniform());
    Vector v(d);
    for (Index i = 0; i < d; ++i) v[i] = -2.0 + 4.0 * rng.uniform();
    t.push_back(v);
  }
  return weighted_quadratic(std::move(w), std::move(t), reg);
}

inline Vector random_vector(SplitMix64& rng, Index d, double lo, double hi) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) v[i] = lo + (hi - lo) * rng.uniform();
  return v;
}

}  // namespace ipiag::testing
