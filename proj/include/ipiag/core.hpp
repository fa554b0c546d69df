#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipiag/prox.hpp"
#include "ipiag/types.hpp"

namespace ipiag {

/// Adds grad f_n(x) into `out` (component index n is 0-based).
using ComponentGradientFn = std::function<void(Index n, const Vector& x, Vector& out)>;
/// Adds sum_{n in [first, last)} grad f_n(x) into `out`.
using BlockGradientFn = std::function<void(Index first, Index last, const Vector& x, Vector& out)>;
using ValueFn = std::function<double(const Vector& x)>;
/// Writes prox_{alpha h}(v) into `out`.
using ProxFn = std::function<void(const Vector& v, double alpha, Vector& out)>;

struct ProblemOracles {
  ComponentGradientFn component_gradient;
  /// Optional fast path; falls back to summing component_gradient.
  BlockGradientFn block_gradient;
  ValueFn smooth_value;
  ValueFn regularizer_value;
  ProxFn prox;
};

struct KnownOptimum {
  Vector point;
  double value = 0.0;
};

/// Named generator that produced a problem. Problems serialize by name, never as code.
struct GeneratorInfo {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

struct ProblemMetadata {
  Index dimension = 0;
  Index num_components = 0;
  std::vector<double> component_lipschitz;
  /// When set, must agree with the sum of component_lipschitz.
  std::optional<double> declared_total_lipschitz;
  /// Quadratic-growth modulus beta; absent when no constant is known (Lasso).
  std::optional<double> growth_constant;
  std::optional<KnownOptimum> known_optimum;
  std::optional<ProxSpec> regularizer;
  GeneratorInfo generator;
};

/// min_x F(x) + h(x) with F = sum_n f_n. Immutable once built; the
/// constructor checks the metadata invariants. Oracles must be reentrant.
class CompositeProblem {
 public:
  CompositeProblem(ProblemOracles oracles, ProblemMetadata metadata);

  Index dimension() const { return meta_.dimension; }
  Index num_components() const { return meta_.num_components; }
  const std::vector<double>& component_lipschitz() const { return meta_.component_lipschitz; }
  double total_lipschitz() const { return total_lipschitz_; }
  const std::optional<double>& growth_constant() const { return meta_.growth_constant; }
  const std::optional<KnownOptimum>& known_optimum() const { return meta_.known_optimum; }
  const std::optional<ProxSpec>& regularizer() const { return meta_.regularizer; }
  const GeneratorInfo& generator() const { return meta_.generator; }
  const ProblemMetadata& metadata() const { return meta_; }
  const ProblemOracles& oracles() const { return oracles_; }

  void add_component_gradient(Index n, const Vector& x, Vector& out) const;
  void add_block_gradient(Index first, Index last, const Vector& x, Vector& out) const;
  Vector component_gradient(Index n, const Vector& x) const;
  double smooth_value(const Vector& x) const;
  double regularizer_value(const Vector& x) const;
  void prox(const Vector& v, double alpha, Vector& out) const;
  Vector prox(const Vector& v, double alpha) const;

  /// Copy with a different optimum (e.g. a computed reference solution).
  CompositeProblem with_known_optimum(KnownOptimum optimum) const;
  /// Copy with a user-supplied growth constant.
  CompositeProblem with_growth_constant(double beta) const;

 private:
  ProblemOracles oracles_;
  ProblemMetadata meta_;
  double total_lipschitz_ = 0.0;
};

/// Phi(x) = F(x) + h(x); +infinity when h(x) is.
double evaluate_objective(const CompositeProblem& problem, const Vector& x);

/// sum_n grad f_n(x).
Vector full_gradient(const CompositeProblem& problem, const Vector& x);

/// max_i |central difference of F along e_i - grad_i F(x)| / (1 + ||grad F(x)||_inf).
double gradient_consistency_check(const CompositeProblem& problem, const Vector& x, double step);

/// Largest observed ratio ||grad f_n(x) - grad f_n(y)|| / (L_n ||x - y||) over the pairs.
/// Values above 1 mean the Lipschitz metadata is wrong.
double lipschitz_ratio(const CompositeProblem& problem, Index n, const Vector& x, const Vector& y);

/// Squared Euclidean distance.
inline double distance_squared(const Vector& a, const Vector& b) { return (a - b).squaredNorm(); }

}  // namespace ipiag
