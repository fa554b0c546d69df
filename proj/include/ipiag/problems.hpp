#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include <Eigen/Core>
#include <json.hpp>

#include "ipiag/core.hpp"

namespace ipiag {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Chain of N coupled quadratics (components 1-based in the formulas):
///   f_1(x) = (x_1 - c)^2 + 1/2 (x_2 + c)^2
///   f_n(x) = 1/2 (x_{n-1} + c)^2 + 1/2 (x_n - c)^2 + 1/2 (x_{n+1} + c)^2,  1 < n < N
///   f_N(x) = 1/2 (x_{N-1} + c)^2 + 1/2 (x_N - c)^2
/// with h = lambda1 ||x||_1 + indicator{x >= 0}. The Hessian of F is
/// diag(3, ..., 3, 2), so L = N + 1 (sum of L_n) and beta = 2.
struct ToySpec {
  Index N = 100;
  double c = 3.0;
  double lambda1 = 1.0;
  int num_workers = 4;

  void validate() const;
};

CompositeProblem make_toy(const ToySpec& spec);

/// x* = max(0, c - lambda1)/3 e_1.
Vector toy_optimum(const ToySpec& spec);

struct LassoSpec {
  Index m = 60;
  Index n = 200;
  double sparsity = 0.1;
  double lambda = 0.2;
  std::uint64_t seed = 0;
  /// Quadratic-growth constant, only if the user supplies one.
  std::optional<double> beta;

  void validate() const;
};

/// Draw order from SplitMix64(seed): A row by row (standard Gaussian), then
/// the support of the planted signal by partial Fisher-Yates over 0..n-1
/// (round(sparsity n) draws of below()), then one Gaussian per support entry
/// in draw order. b = A x_planted, no noise.
struct LassoData {
  RowMatrix A;
  Vector b;
  Vector x_planted;
};

LassoData generate_lasso_data(const LassoSpec& spec);

/// f_i(x) = 1/2 (a_i^T x - b_i)^2, L_i = ||a_i||^2, h = lambda ||x||_1.
/// No known optimum; see lasso_reference_solution.
CompositeProblem make_lasso(const LassoSpec& spec);
CompositeProblem make_lasso(std::shared_ptr<const LassoData> data, double lambda,
                            std::optional<double> beta, GeneratorInfo generator);

/// F -> s F, h -> s h. Minimizers are unchanged; L_n, beta and Phi* scale by s.
CompositeProblem scale_problem(const CompositeProblem& problem, double s);

/// Largest eigenvalue of the (constant) Hessian of F by power iteration on
/// gradient differences. Only meaningful for quadratic F.
double quadratic_hessian_max_eigenvalue(const CompositeProblem& problem, int iterations = 500,
                                        std::uint64_t seed = 1);

struct ReferenceOptions {
  double step_tolerance = 1e-10;
  Index max_iters = 2'000'000;
};

/// Synchronous proximal gradient (PIAG with tau = 0) at step 1/lambda_max(Hessian)
/// from x0 = 0, run until ||z_{k+1} - z_k|| < step_tolerance. Throws
/// NumericError if the tolerance is not reached within max_iters.
KnownOptimum lasso_reference_solution(const CompositeProblem& problem,
                                      const ReferenceOptions& options = {});

/// { dimension, num_components, generator {name, params, seed}, L_n, beta,
///   known_optimum {point, value} (optional), prox {kind, lambda} }.
nlohmann::json problem_to_json(const CompositeProblem& problem);

/// Rebuilds a problem from its generator block ("toy", "lasso", "scaled").
/// Accepts a full problem document or a bare generator block. When a full
/// document is given, its L_n must match the regenerated problem and its
/// beta / known_optimum override the generator's.
CompositeProblem problem_from_json(const nlohmann::json& j);

}  // namespace ipiag
