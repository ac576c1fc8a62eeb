#ifndef PDP_BENCH_HPP_
#define PDP_BENCH_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>

#include "pdp/types.hpp"

namespace pdp {

/// Reference run could not reach the required accuracy within its
/// iteration cap.
class NoReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seedable generator with a platform-independent output stream:
/// mt19937_64 (bit-exact by the standard) plus an explicit Box-Muller
/// transform, so Gaussian draws do not depend on the standard library's
/// normal_distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (Box-Muller, pairs cached).
  double normal();

  /// Matrix with independent N(0,1) entries, filled row by row.
  Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  Vector gaussian_vector(Eigen::Index n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Equality-constrained l1 instance  min ||x||_1  s.t. Ax = b, with A
/// standard normal and b = A x0 for a sparse x0, so the instance is
/// feasible and CR can reach zero.
struct BasisPursuitInstance {
  Matrix a;
  Vector b;
  Vector ground_truth;  // the x0 behind b (not necessarily the optimum)
  ProblemSpec spec;     // default parameters beta = 0.001, tau = 2.5
};

/// Two-block LASSO reformulation  min 1/2||x - b||^2 + sigma||y||_1
/// s.t. x - A y = 0, with unit-norm columns, a sparse planted y*, and
/// b = A y* + e for Gaussian noise e with variance 1e-3.
struct LassoInstance {
  Matrix a;
  Vector y_star;
  Vector noise;
  Vector b;
  double sigma = 0.1;
  ProblemSpec spec;  // parameters from lasso_params at tau2 = 0.5
};

/// One-block spec around (a, b) with theta = ||.||_1, penalty beta and
/// proximal mode Q = tau I - beta A'A.
ProblemSpec make_basis_pursuit_spec(const Matrix& a, const Vector& b, double beta, double tau);

/// Two-block spec encoding the LASSO reformulation: block 1 is
/// (1/2||x - b||^2, I) and block 2 is (sigma||y||_1, -A), constraint
/// x - A y = 0. tau1/tau2 parameterize the Gram-cancelling prox modes.
ProblemSpec make_lasso_spec(const Matrix& a, const Vector& b, double sigma, double beta1,
                            double beta2, double tau1, double tau2);

BasisPursuitInstance gen_basis_pursuit(int m, int n, std::uint64_t seed);
LassoInstance gen_lasso(int m, int n, std::uint64_t seed);

/// The tuned parameter recipe for the LASSO sweep:
///   beta1 = beta2 = (2 - tau2) / (tau2 |tau2 - 1|)
///   tau1  = |tau2 - 1| / (5 beta1 tau2) + 4/5
/// Valid for tau2 in (0,1) u (1,2); throws std::domain_error outside.
struct LassoParams {
  double beta1;
  double beta2;
  double tau1;
};
LassoParams lasso_params(double tau2);

/// High-accuracy solution for certificate references: runs the certified
/// solver (PDP for one block, proof-consistent splitting/partial-prox
/// otherwise) to tol 1e-13 with a 1e6 iteration cap, from a seeded
/// Gaussian start. Block tau values are raised to their spectral bounds
/// when the spec's own values violate them, so the reference run is
/// always a certified configuration; the solution set is unaffected.
/// Throws NoReferenceError when the cap is hit with vi_residual > 1e-8.
struct ReferenceSolution {
  Iterate point;
  double residual;  // vi_residual at point
  int iterations;
};
ReferenceSolution reference_solution(const ProblemSpec& spec, std::uint64_t seed);

/// Gaussian start point for a spec, the way the benchmark harness draws
/// initial iterates.
Iterate random_start(const ProblemSpec& spec, std::uint64_t seed);

}  // namespace pdp

#endif  // PDP_BENCH_HPP_
