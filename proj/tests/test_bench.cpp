#include <doctest.h>

#include <cmath>

#include "pdp/bench.hpp"
#include "pdp/diagnostics.hpp"
#include "pdp/prox.hpp"
#include "pdp/solvers.hpp"
#include "support/oracles.hpp"

using namespace pdp;

TEST_CASE("rng: deterministic stream and sane gaussian moments") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());

  Rng c(5);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = c.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("basis pursuit generator") {
  SUBCASE("bitwise determinism") {
    const BasisPursuitInstance a = gen_basis_pursuit(12, 25, 99);
    const BasisPursuitInstance b = gen_basis_pursuit(12, 25, 99);
    CHECK((a.a - b.a).norm() == 0.0);
    CHECK((a.b - b.b).norm() == 0.0);
    CHECK((a.ground_truth - b.ground_truth).norm() == 0.0);
  }
  SUBCASE("table-1 dimensions") {
    const BasisPursuitInstance inst = gen_basis_pursuit(300, 500, 1);
    CHECK(inst.a.rows() == 300);
    CHECK(inst.a.cols() == 500);
    CHECK(inst.spec.rhs.size() == 300);
  }
  SUBCASE("m >= n is rejected") {
    CHECK_THROWS_AS(gen_basis_pursuit(500, 300, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_basis_pursuit(300, 300, 1), std::invalid_argument);
  }
  SUBCASE("instances are exactly feasible at the planted point") {
    const BasisPursuitInstance inst = gen_basis_pursuit(10, 20, 7);
    CHECK((inst.a * inst.ground_truth - inst.b).squaredNorm() == 0.0);  // CR can reach 0
    CHECK(inst.ground_truth.cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("lasso generator") {
  SUBCASE("paper-scale dimensions accepted") {
    // full 1050x3500 is behind the CLI flag; the generator itself has no cap
    const LassoInstance inst = gen_lasso(105, 350, 4);
    CHECK(inst.a.rows() == 105);
    CHECK(inst.a.cols() == 350);
  }
  SUBCASE("unit column norms") {
    const LassoInstance inst = gen_lasso(40, 120, 11);
    for (Eigen::Index j = 0; j < inst.a.cols(); ++j)
      CHECK(std::abs(inst.a.col(j).norm() - 1.0) <= 1e-12);
  }
  SUBCASE("planted sparsity close to 100/n density") {
    const LassoInstance inst = gen_lasso(105, 350, 2);
    const int nnz = static_cast<int>((inst.y_star.array() != 0.0).count());
    CHECK(nnz >= 50);   // 0.5 * (100/n) * n
    CHECK(nnz <= 150);  // 1.5 * (100/n) * n
  }
  SUBCASE("b = A y* + e with small noise") {
    const LassoInstance inst = gen_lasso(30, 90, 3);
    CHECK((inst.b - inst.a * inst.y_star - inst.noise).norm() < 1e-12);
    CHECK(inst.noise.norm() < 1.0);
    CHECK(inst.sigma == 0.1);
  }
  SUBCASE("determinism") {
    const LassoInstance a = gen_lasso(25, 60, 13);
    const LassoInstance b = gen_lasso(25, 60, 13);
    CHECK((a.a - b.a).norm() == 0.0);
    CHECK((a.b - b.b).norm() == 0.0);
  }
}

TEST_CASE("lasso parameter recipe") {
  SUBCASE("hand value at tau2 = 0.5") {
    const LassoParams p = lasso_params(0.5);
    CHECK(p.beta1 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(p.beta2 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(p.tau1 == doctest::Approx(1.0 / 30.0 + 0.8).epsilon(1e-14));
  }
  SUBCASE("singular and out-of-domain values are rejected") {
    CHECK_THROWS_AS(lasso_params(0.0), std::domain_error);
    CHECK_THROWS_AS(lasso_params(1.0), std::domain_error);
    CHECK_THROWS_AS(lasso_params(2.0), std::domain_error);
    CHECK_THROWS_AS(lasso_params(-0.3), std::domain_error);
  }
  SUBCASE("the paper sweep is entirely in-domain") {
    for (int i = 1; i <= 14; ++i) {
      const LassoParams p = lasso_params(0.05 * i);
      CHECK(p.beta1 > 0.0);
      CHECK(p.tau1 > 0.0);
    }
  }
}

TEST_CASE("reference solution: trivial instance hits the origin") {
  ProblemSpec spec;
  BlockSpec blk;
  blk.objective = std::make_shared<ZeroObjective>();
  blk.matrix = Matrix::Identity(4, 4);
  blk.beta = 1.0;
  blk.prox_mode = IdentityMinusGram{2.0};
  spec.blocks.push_back(std::move(blk));
  spec.rhs = Vector::Zero(4);
  spec.proximal_count = 1;

  const ReferenceSolution ref = reference_solution(spec, 17);
  CHECK(ref.point.stacked().norm() < 1e-9);
  CHECK(ref.residual < 1e-9);
}

TEST_CASE("reference solution matches the enumeration oracle on a small basis pursuit") {
  const BasisPursuitInstance inst = gen_basis_pursuit(8, 16, 5);
  const ReferenceSolution ref = reference_solution(inst.spec, 5);
  const double got = objective_value(inst.spec, ref.point);
  const double want = pdp::testing::lp_basis_pursuit_optimum(inst.a, inst.b);
  CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("reference solution: lasso objective is stationary under a tighter tolerance") {
  const LassoInstance inst = gen_lasso(20, 50, 21);
  const ProblemSpec spec = make_lasso_spec(inst.a, inst.b, inst.sigma, 1.0, 1.0, 2.0, 9.0);
  const ReferenceSolution ref = reference_solution(spec, 3);
  const double obj = objective_value(spec, ref.point);

  // independent start; dropping the tolerance 10x should not move the objective
  SolverConfig cfg;
  cfg.algorithm = Algorithm::SplittingPdp;
  cfg.tol = 1e-12;
  cfg.max_iter = 1000000;
  const SolveResult res = solve(spec, cfg, random_start(spec, 55));
  REQUIRE(res.converged);
  CHECK(std::abs(objective_value(spec, res.final) - obj) < 1e-9 * std::max(1.0, std::abs(obj)));
}

TEST_CASE("lp enumeration oracle sanity: identity-augmented system") {
  // A = [I | I], b arbitrary: optimum splits b across duplicated columns but
  // the l1 cost equals ||b||_1.
  Matrix a(3, 6);
  a << Matrix::Identity(3, 3), Matrix::Identity(3, 3);
  Vector b(3);
  b << 1.0, -2.0, 0.5;
  CHECK(pdp::testing::lp_basis_pursuit_optimum(a, b) ==
        doctest::Approx(b.lpNorm<1>()).epsilon(1e-12));
}
