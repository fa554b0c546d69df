#include "ipiag/problems.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ipiag/random.hpp"

namespace ipiag {

void ToySpec::validate() const {
  require(N >= 2, "toy: N must be >= 2");
  require(c >= 0.0 && std::isfinite(c), "toy: c must be >= 0");
  require(lambda1 >= 0.0 && std::isfinite(lambda1), "toy: lambda1 must be >= 0");
  require(num_workers >= 1, "toy: num_workers must be >= 1");
}

Vector toy_optimum(const ToySpec& spec) {
  spec.validate();
  Vector x = Vector::Zero(spec.N);
  x[0] = std::max(0.0, spec.c - spec.lambda1) / 3.0;
  return x;
}

CompositeProblem make_toy(const ToySpec& spec) {
  spec.validate();
  const Index N = spec.N;
  const double c = spec.c;
  const ProxSpec reg{ProxKind::nonneg_l1, spec.lambda1};

  ProblemOracles o;
  o.component_gradient = [N, c](Index n, const Vector& x, Vector& out) {
    if (n == 0) {
      out[0] += 2.0 * (x[0] - c);
      out[1] += x[1] + c;
      return;
    }
    out[n - 1] += x[n - 1] + c;
    out[n] += x[n] - c;
    if (n + 1 < N) out[n + 1] += x[n + 1] + c;
  };
  o.block_gradient = [N, c](Index first, Index last, const Vector& x, Vector& out) {
    for (Index n = first; n < last; ++n) {
      if (n == 0) {
        out[0] += 2.0 * (x[0] - c);
        out[1] += x[1] + c;
        continue;
      }
      out[n - 1] += x[n - 1] + c;
      out[n] += x[n] - c;
      if (n + 1 < N) out[n + 1] += x[n + 1] + c;
    }
  };
  o.smooth_value = [N, c](const Vector& x) {
    double f = (x[0] - c) * (x[0] - c) + 0.5 * (x[1] + c) * (x[1] + c);
    for (Index n = 1; n < N; ++n) {
      f += 0.5 * (x[n - 1] + c) * (x[n - 1] + c) + 0.5 * (x[n] - c) * (x[n] - c);
      if (n + 1 < N) f += 0.5 * (x[n + 1] + c) * (x[n + 1] + c);
    }
    return f;
  };
  o.regularizer_value = [reg](const Vector& x) { return regularizer_value(reg, x); };
  o.prox = [reg](const Vector& v, double alpha, Vector& out) { apply_prox(reg, v, alpha, out); };

  ProblemMetadata meta;
  meta.dimension = N;
  meta.num_components = N;
  meta.component_lipschitz.assign(static_cast<std::size_t>(N), 1.0);
  meta.component_lipschitz[0] = 2.0;
  meta.growth_constant = 2.0;
  meta.regularizer = reg;
  meta.generator.name = "toy";
  meta.generator.params = {
      {"N", N}, {"c", c}, {"lambda1", spec.lambda1}, {"num_workers", spec.num_workers}};

  CompositeProblem problem(std::move(o), meta);
  Vector xs = toy_optimum(spec);
  const double value = evaluate_objective(problem, xs);
  return problem.with_known_optimum({std::move(xs), value});
}

// ---------------------------------------------------------------------------

void LassoSpec::validate() const {
  require(m >= 1 && n >= 1, "lasso: m and n must be >= 1");
  require(sparsity > 0.0 && sparsity <= 1.0, "lasso: sparsity must lie in (0, 1]");
  require(lambda > 0.0 && std::isfinite(lambda), "lasso: lambda must be positive");
  if (beta) require(*beta > 0.0, "lasso: beta must be positive");
}

LassoData generate_lasso_data(const LassoSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  LassoData d;
  d.A.resize(spec.m, spec.n);
  for (Index i = 0; i < spec.m; ++i) {
    for (Index j = 0; j < spec.n; ++j) d.A(i, j) = rng.gaussian();
  }
  const auto nnz = static_cast<Index>(std::llround(spec.sparsity * static_cast<double>(spec.n)));
  std::vector<Index> perm(static_cast<std::size_t>(spec.n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < nnz; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(spec.n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  d.x_planted = Vector::Zero(spec.n);
  for (Index i = 0; i < nnz; ++i) d.x_planted[perm[static_cast<std::size_t>(i)]] = rng.gaussian();
  d.b = d.A * d.x_planted;
  return d;
}

CompositeProblem make_lasso(std::shared_ptr<const LassoData> data, double lambda,
                            std::optional<double> beta, GeneratorInfo generator) {
  require(data != nullptr, "lasso: missing data");
  require(data->A.rows() == data->b.size(), "lasso: A and b disagree in length");
  require(lambda > 0.0, "lasso: lambda must be positive");
  const ProxSpec reg{ProxKind::l1, lambda};

  ProblemOracles o;
  o.component_gradient = [data](Index i, const Vector& x, Vector& out) {
    const auto row = data->A.row(i);
    out.noalias() += (row.dot(x) - data->b[i]) * row.transpose();
  };
  o.block_gradient = [data](Index first, Index last, const Vector& x, Vector& out) {
    const auto block = data->A.middleRows(first, last - first);
    const Vector r = block * x - data->b.segment(first, last - first);
    out.noalias() += block.transpose() * r;
  };
  o.smooth_value = [data](const Vector& x) {
    return 0.5 * (data->A * x - data->b).squaredNorm();
  };
  o.regularizer_value = [reg](const Vector& x) { return regularizer_value(reg, x); };
  o.prox = [reg](const Vector& v, double alpha, Vector& out) { apply_prox(reg, v, alpha, out); };

  ProblemMetadata meta;
  meta.dimension = data->A.cols();
  meta.num_components = data->A.rows();
  meta.component_lipschitz.resize(static_cast<std::size_t>(data->A.rows()));
  for (Index i = 0; i < data->A.rows(); ++i) {
    // A zero row would give L_i = 0; the Gaussian generator never produces one.
    meta.component_lipschitz[static_cast<std::size_t>(i)] = data->A.row(i).squaredNorm();
  }
  meta.growth_constant = beta;
  meta.regularizer = reg;
  meta.generator = std::move(generator);
  return CompositeProblem(std::move(o), std::move(meta));
}

CompositeProblem make_lasso(const LassoSpec& spec) {
  auto data = std::make_shared<const LassoData>(generate_lasso_data(spec));
  GeneratorInfo gen;
  gen.name = "lasso";
  gen.params = {{"m", spec.m}, {"n", spec.n}, {"sparsity", spec.sparsity}, {"lambda", spec.lambda}};
  gen.seed = spec.seed;
  return make_lasso(std::move(data), spec.lambda, spec.beta, std::move(gen));
}

// ---------------------------------------------------------------------------

CompositeProblem scale_problem(const CompositeProblem& problem, double s) {
  require(s > 0.0 && std::isfinite(s), "scale_problem: scale must be positive");
  const ProblemOracles& base = problem.oracles();
  ProblemOracles o;
  o.component_gradient = [g = base.component_gradient, s](Index n, const Vector& x, Vector& out) {
    Vector tmp = Vector::Zero(x.size());
    g(n, x, tmp);
    out += s * tmp;
  };
  if (base.block_gradient) {
    o.block_gradient = [g = base.block_gradient, s](Index first, Index last, const Vector& x,
                                                   Vector& out) {
      Vector tmp = Vector::Zero(x.size());
      g(first, last, x, tmp);
      out += s * tmp;
    };
  }
  o.smooth_value = [f = base.smooth_value, s](const Vector& x) { return s * f(x); };
  o.regularizer_value = [h = base.regularizer_value, s](const Vector& x) { return s * h(x); };
  o.prox = [p = base.prox, s](const Vector& v, double alpha, Vector& out) { p(v, s * alpha, out); };

  ProblemMetadata meta = problem.metadata();
  for (double& l : meta.component_lipschitz) l *= s;
  meta.declared_total_lipschitz.reset();
  if (meta.growth_constant) *meta.growth_constant *= s;
  if (meta.known_optimum) meta.known_optimum->value *= s;
  if (meta.regularizer) meta.regularizer->weight *= s;
  GeneratorInfo gen;
  gen.name = "scaled";
  gen.params = {{"scale", s},
                {"base", {{"name", meta.generator.name},
                          {"params", meta.generator.params},
                          {"seed", meta.generator.seed}}}};
  gen.seed = meta.generator.seed;
  meta.generator = std::move(gen);
  return CompositeProblem(std::move(o), std::move(meta));
}

double quadratic_hessian_max_eigenvalue(const CompositeProblem& problem, int iterations,
                                        std::uint64_t seed) {
  require(iterations >= 1, "power iteration: iterations must be >= 1");
  const Index d = problem.dimension();
  const Vector g0 = full_gradient(problem, Vector::Zero(d));
  SplitMix64 rng(seed);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v[i] = rng.gaussian();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector hv = full_gradient(problem, v) - g0;
    lambda = v.dot(hv);
    const double norm = hv.norm();
    if (norm == 0.0) return 0.0;
    v = hv / norm;
  }
  return lambda;
}

KnownOptimum lasso_reference_solution(const CompositeProblem& problem,
                                      const ReferenceOptions& options) {
  require(options.step_tolerance > 0.0, "reference: step tolerance must be positive");
  const double lmax = quadratic_hessian_max_eigenvalue(problem);
  require(lmax > 0.0, "reference: smooth part has a zero Hessian");
  const double alpha = 1.0 / lmax;
  const Index d = problem.dimension();
  Vector z = Vector::Zero(d);
  Vector g(d);
  Vector next(d);
  for (Index k = 0; k < options.max_iters; ++k) {
    g.setZero();
    problem.add_block_gradient(0, problem.num_components(), z, g);
    problem.prox(z - alpha * g, alpha, next);
    const double step = (next - z).norm();
    z.swap(next);
    if (!std::isfinite(step)) throw NumericError("reference: non-finite iterate", k);
    if (step < options.step_tolerance) return {z, evaluate_objective(problem, z)};
  }
  throw NumericError("reference: step tolerance not reached", options.max_iters);
}

// ---------------------------------------------------------------------------

nlohmann::json problem_to_json(const CompositeProblem& problem) {
  const auto& meta = problem.metadata();
  nlohmann::json j;
  j["dimension"] = meta.dimension;
  j["num_components"] = meta.num_components;
  j["generator"] = {{"name", meta.generator.name},
                    {"params", meta.generator.params},
                    {"seed", meta.generator.seed}};
  j["L_n"] = meta.component_lipschitz;
  j["beta"] = meta.growth_constant ? nlohmann::json(*meta.growth_constant) : nlohmann::json(nullptr);
  if (meta.known_optimum) {
    const Vector& p = meta.known_optimum->point;
    j["known_optimum"] = {{"point", std::vector<double>(p.data(), p.data() + p.size())},
                          {"value", meta.known_optimum->value}};
  }
  if (meta.regularizer) {
    j["prox"] = {{"kind", std::string(to_string(meta.regularizer->kind))},
                 {"lambda", meta.regularizer->weight}};
  }
  return j;
}

namespace {

CompositeProblem from_generator(const nlohmann::json& gen) {
  const auto name = gen.at("name").get<std::string>();
  const nlohmann::json params = gen.value("params", nlohmann::json::object());
  const auto seed = gen.value("seed", std::uint64_t{0});
  if (name == "toy") {
    ToySpec s;
    s.N = params.value("N", s.N);
    s.c = params.value("c", s.c);
    s.lambda1 = params.value("lambda1", s.lambda1);
    s.num_workers = params.value("num_workers", s.num_workers);
    return make_toy(s);
  }
  if (name == "lasso") {
    LassoSpec s;
    s.m = params.value("m", s.m);
    s.n = params.value("n", s.n);
    s.sparsity = params.value("sparsity", s.sparsity);
    s.lambda = params.value("lambda", s.lambda);
    s.seed = seed;
    if (params.contains("beta") && !params.at("beta").is_null()) {
      s.beta = params.at("beta").get<double>();
    }
    return make_lasso(s);
  }
  if (name == "scaled") {
    return scale_problem(from_generator(params.at("base")), params.at("scale").get<double>());
  }
  throw InputError("unknown problem generator '" + name + "'");
}

}  // namespace

CompositeProblem problem_from_json(const nlohmann::json& j) {
  try {
    if (!j.contains("generator")) return from_generator(j);
    CompositeProblem problem = from_generator(j.at("generator"));
    if (j.contains("L_n")) {
      const auto declared = j.at("L_n").get<std::vector<double>>();
      const auto& actual = problem.component_lipschitz();
      require(declared.size() == actual.size(), "problem: L_n length disagrees with generator");
      for (std::size_t i = 0; i < declared.size(); ++i) {
        require(std::abs(declared[i] - actual[i]) <= 1e-12 * std::max(1.0, actual[i]),
                "problem: L_n disagrees with generator");
      }
    }
    if (j.contains("dimension")) {
      require(j.at("dimension").get<Index>() == problem.dimension(),
              "problem: dimension disagrees with generator");
    }
    if (j.contains("beta") && !j.at("beta").is_null()) {
      problem = problem.with_growth_constant(j.at("beta").get<double>());
    }
    if (j.contains("known_optimum") && !j.at("known_optimum").is_null()) {
      const auto& ko = j.at("known_optimum");
      const auto point = ko.at("point").get<std::vector<double>>();
      Vector p = Eigen::Map<const Vector>(point.data(), static_cast<Index>(point.size()));
      problem = problem.with_known_optimum({std::move(p), ko.at("value").get<double>()});
    }
    return problem;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("problem JSON: ") + e.what());
  }
}

}  // namespace ipiag
