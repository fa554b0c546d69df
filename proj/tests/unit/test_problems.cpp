#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ipiag/problems.hpp"
#include "test_problems.hpp"

using namespace ipiag;

TEST_CASE("toy problem metadata") {
  const CompositeProblem toy = make_toy({.N = 100, .c = 3.0, .lambda1 = 1.0, .num_workers = 4});
  CHECK(toy.total_lipschitz() == 101.0);
  CHECK(*toy.growth_constant() == 2.0);
  const Vector xs = toy.known_optimum()->point;
  CHECK(xs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(xs.tail(99).isZero(0.0));
  CHECK(toy.regularizer()->kind == ProxKind::nonneg_l1);
  CHECK(toy.regularizer()->weight == 1.0);

  const CompositeProblem flat = make_toy({.N = 5, .c = 1.0, .lambda1 = 2.0, .num_workers = 1});
  CHECK(flat.known_optimum()->point.isZero(0.0));
  CHECK_THROWS_AS(make_toy({.N = 1, .c = 1.0, .lambda1 = 1.0, .num_workers = 1}), InputError);
  CHECK_THROWS_AS(make_toy({.N = 5, .c = -1.0, .lambda1 = 1.0, .num_workers = 1}), InputError);
}

TEST_CASE("toy optimum satisfies first-order optimality") {
  for (double c : {0.5, 1.0, 3.0, 7.0}) {
    const ToySpec spec{.N = 9, .c = c, .lambda1 = 1.0, .num_workers = 3};
    const CompositeProblem toy = make_toy(spec);
    const Vector xs = toy.known_optimum()->point;
    const Vector g = full_gradient(toy, xs);
    for (double alpha : {0.01, 0.1, 0.3}) CHECK((toy.prox(xs - alpha * g, alpha) - xs).norm() <= 1e-12);
  }
}

TEST_CASE("toy Hessian spectrum lies in [beta, L]") {
  for (Index N : {2, 3, 7, 20}) {
    const CompositeProblem toy = make_toy({.N = N, .c = 3.0, .lambda1 = 1.0, .num_workers = 1});
    Eigen::MatrixXd H(N, N);
    const Vector g0 = full_gradient(toy, Vector::Zero(N));
    for (Index i = 0; i < N; ++i) H.col(i) = full_gradient(toy, Vector::Unit(N, i)) - g0;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    CHECK(eig.eigenvalues().minCoeff() >= 2.0 - 1e-12);
    CHECK(eig.eigenvalues().maxCoeff() <= static_cast<double>(N + 1) + 1e-12);
    const double power = quadratic_hessian_max_eigenvalue(toy);
    CHECK(power == doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-9));
  }
}

TEST_CASE("generators pass finite-difference checks") {
  const CompositeProblem toy = make_toy({});
  const CompositeProblem lasso = make_lasso({.m = 60, .n = 200, .sparsity = 0.1, .lambda = 0.2, .seed = 3});
  const CompositeProblem scaled = scale_problem(make_toy({.N = 10, .c = 2.0, .lambda1 = 0.5, .num_workers = 2}), 3.7);
  SplitMix64 rng(100);
  for (const CompositeProblem* p : {&toy, &lasso, &scaled}) {
    for (int i = 0; i < 20; ++i) {
      CHECK(gradient_consistency_check(*p, testing::random_vector(rng, p->dimension(), -2, 2), 1e-6) <= 1e-5);
    }
  }
}

TEST_CASE("lasso generator") {
  const LassoSpec spec{.m = 60, .n = 200, .sparsity = 0.1, .lambda = 0.2, .seed = 7};
  const LassoData d = generate_lasso_data(spec);
  CHECK(d.A.rows() == 60);
  CHECK(d.A.cols() == 200);
  Index nnz = 0;
  for (Index j = 0; j < 200; ++j) nnz += d.x_planted[j] != 0.0;
  CHECK(nnz == 20);
  CHECK((d.A * d.x_planted - d.b).norm() == 0.0);

  const LassoData again = generate_lasso_data(spec);
  CHECK(again.A == d.A);
  CHECK(again.x_planted == d.x_planted);
  CHECK_FALSE(generate_lasso_data({.m = 60, .n = 200, .sparsity = 0.1, .lambda = 0.2, .seed = 8}).A == d.A);

  const CompositeProblem p = make_lasso(spec);
  CHECK_FALSE(p.growth_constant().has_value());
  CHECK_FALSE(p.known_optimum().has_value());
  for (Index i = 0; i < 60; ++i) CHECK(p.component_lipschitz()[static_cast<std::size_t>(i)] == d.A.row(i).squaredNorm());
  CHECK(p.total_lipschitz() == doctest::Approx(d.A.squaredNorm()).epsilon(1e-14));

  SplitMix64 rng(9);
  const Vector x = testing::random_vector(rng, 200, -1, 1);
  const Vector expect = d.A.transpose() * (d.A * x - d.b);
  CHECK((full_gradient(p, x) - expect).lpNorm<Eigen::Infinity>() <= 1e-10);
  Vector by_component = Vector::Zero(200);
  for (Index i = 0; i < 60; ++i) p.add_component_gradient(i, x, by_component);
  CHECK((by_component - expect).lpNorm<Eigen::Infinity>() <= 1e-10);
  CHECK(p.smooth_value(x) == doctest::Approx(0.5 * (d.A * x - d.b).squaredNorm()).epsilon(1e-14));

  CHECK_THROWS_AS(make_lasso({.m = 0, .n = 3, .sparsity = 0.1, .lambda = 0.2, .seed = 0}), InputError);
  CHECK_THROWS_AS(make_lasso({.m = 3, .n = 3, .sparsity = 0.0, .lambda = 0.2, .seed = 0}), InputError);
  CHECK_THROWS_AS(make_lasso({.m = 3, .n = 3, .sparsity = 0.5, .lambda = 0.0, .seed = 0}), InputError);
}

TEST_CASE("lasso reference solution") {
  SUBCASE("one-dimensional instance") {
    // minimize 1/2 (2x - 2)^2 + |x|  ->  x = 3/4
    auto d = std::make_shared<LassoData>();
    d->A = RowMatrix::Constant(1, 1, 2.0);
    d->b = Vector::Constant(1, 2.0);
    d->x_planted = Vector::Constant(1, 1.0);
    const CompositeProblem p = make_lasso(d, 1.0, std::nullopt, {"lasso", {}, 0});
    const KnownOptimum ref = lasso_reference_solution(p);
    CHECK(ref.point[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(ref.value == doctest::Approx(0.5 * 0.25 + 0.75).epsilon(1e-9));
  }
  SUBCASE("large lambda gives zero") {
    const LassoData d = generate_lasso_data({.m = 20, .n = 50, .sparsity = 0.2, .lambda = 1.0, .seed = 2});
    const double lam = (d.A.transpose() * d.b).lpNorm<Eigen::Infinity>() * 1.01;
    const CompositeProblem p = make_lasso(std::make_shared<const LassoData>(d), lam, std::nullopt, {"lasso", {}, 2});
    const KnownOptimum ref = lasso_reference_solution(p);
    CHECK(ref.point.isZero(0.0));
  }
  SUBCASE("desk-scale optimality") {
    const CompositeProblem p = make_lasso({.m = 60, .n = 200, .sparsity = 0.1, .lambda = 0.2, .seed = 1});
    const KnownOptimum ref = lasso_reference_solution(p);
    // prox-gradient fixed point at a different step
    const Vector g = full_gradient(p, ref.point);
    const double alpha = 1e-3;
    CHECK((p.prox(ref.point - alpha * g, alpha) - ref.point).norm() <= 1e-8);
  }
}

TEST_CASE("scaled problems") {
  const CompositeProblem toy = make_toy({.N = 10, .c = 3.0, .lambda1 = 1.0, .num_workers = 2});
  const CompositeProblem s = scale_problem(toy, 4.0);
  CHECK(s.total_lipschitz() == 44.0);
  CHECK(*s.growth_constant() == 8.0);
  CHECK(s.known_optimum()->point == toy.known_optimum()->point);
  CHECK(s.known_optimum()->value == 4.0 * toy.known_optimum()->value);
  const Vector xs = s.known_optimum()->point;
  CHECK(evaluate_objective(s, xs) == doctest::Approx(s.known_optimum()->value).epsilon(1e-14));
  const Vector g = full_gradient(s, xs);
  CHECK((s.prox(xs - 0.01 * g, 0.01) - xs).norm() <= 1e-12);
  CHECK_THROWS_AS(scale_problem(toy, 0.0), InputError);
}

TEST_CASE("problem JSON") {
  const CompositeProblem toy = make_toy({.N = 12, .c = 2.5, .lambda1 = 0.5, .num_workers = 3});
  const nlohmann::json j = problem_to_json(toy);
  for (const char* key : {"dimension", "num_components", "generator", "L_n", "beta", "known_optimum", "prox"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["prox"]["kind"] == "nonneg_l1");
  CHECK(j["prox"]["lambda"] == 0.5);
  const CompositeProblem back = problem_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.component_lipschitz() == toy.component_lipschitz());
  CHECK(back.known_optimum()->point == toy.known_optimum()->point);

  const CompositeProblem lasso = make_lasso({.m = 5, .n = 8, .sparsity = 0.25, .lambda = 0.2, .seed = 9});
  const nlohmann::json jl = problem_to_json(lasso);
  CHECK(jl["beta"].is_null());
  const CompositeProblem lb = problem_from_json(jl);
  CHECK(lb.component_lipschitz() == lasso.component_lipschitz());
  nlohmann::json with_beta = jl;
  with_beta["beta"] = 0.5;
  CHECK(*problem_from_json(with_beta).growth_constant() == 0.5);

  const CompositeProblem sc = scale_problem(toy, 2.0);
  CHECK(problem_from_json(problem_to_json(sc)).total_lipschitz() == sc.total_lipschitz());

  // bare generator block
  CHECK(problem_from_json(nlohmann::json{{"name", "toy"}, {"params", {{"N", 6}}}}).dimension() == 6);

  nlohmann::json tampered = j;
  tampered["L_n"][0] = 3.0;
  CHECK_THROWS_AS(problem_from_json(tampered), InputError);
  CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"name", "logistic"}}), InputError);
  CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"generator", 3}}), InputError);
}
