#include "pdp/bench.hpp"

#include <cmath>
#include <sstream>

#include "pdp/diagnostics.hpp"
#include "pdp/prox.hpp"
#include "pdp/solvers.hpp"

namespace pdp {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1).
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Matrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = normal();
  return a;
}

Vector Rng::gaussian_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

ProblemSpec make_basis_pursuit_spec(const Matrix& a, const Vector& b, double beta, double tau) {
  ProblemSpec spec;
  BlockSpec blk;
  blk.objective = std::make_shared<L1Norm>();
  blk.matrix = a;
  blk.beta = beta;
  blk.prox_mode = IdentityMinusGram{tau};
  spec.blocks.push_back(std::move(blk));
  spec.rhs = b;
  spec.sense = ConstraintSense::Equality;
  spec.proximal_count = 1;
  return spec;
}

ProblemSpec make_lasso_spec(const Matrix& a, const Vector& b, double sigma, double beta1,
                            double beta2, double tau1, double tau2) {
  ProblemSpec spec;
  BlockSpec x_block;
  x_block.objective = std::make_shared<HalfSquaredDistance>(b);
  x_block.matrix = Matrix::Identity(a.rows(), a.rows());
  x_block.beta = beta1;
  x_block.prox_mode = IdentityMinusGram{tau1};

  BlockSpec y_block;
  y_block.objective = std::make_shared<ScaledL1Norm>(sigma);
  y_block.matrix = -a;
  y_block.beta = beta2;
  y_block.prox_mode = IdentityMinusGram{tau2};

  spec.blocks.push_back(std::move(x_block));
  spec.blocks.push_back(std::move(y_block));
  spec.rhs = Vector::Zero(a.rows());
  spec.sense = ConstraintSense::Equality;
  spec.proximal_count = 2;
  return spec;
}

BasisPursuitInstance gen_basis_pursuit(int m, int n, std::uint64_t seed) {
  if (m <= 0 || n <= 0 || m >= n) {
    std::ostringstream msg;
    msg << "gen_basis_pursuit: need 0 < m < n, got " << m << " x " << n;
    throw std::invalid_argument(msg.str());
  }
  Rng rng(seed);
  BasisPursuitInstance inst;
  inst.a = rng.gaussian_matrix(m, n);

  // Sparse planted vector, density 0.1, at least one nonzero.
  inst.ground_truth = Vector::Zero(n);
  int nnz = 0;
  for (int j = 0; j < n; ++j) {
    if (rng.uniform() < 0.1) {
      inst.ground_truth[j] = rng.normal();
      ++nnz;
    }
  }
  if (nnz == 0) inst.ground_truth[0] = rng.normal();

  inst.b = inst.a * inst.ground_truth;
  inst.spec = make_basis_pursuit_spec(inst.a, inst.b, 0.001, 2.5);
  return inst;
}

LassoInstance gen_lasso(int m, int n, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_lasso: dimensions must be positive");
  Rng rng(seed);
  LassoInstance inst;
  inst.a = rng.gaussian_matrix(m, n);
  for (Eigen::Index j = 0; j < n; ++j) inst.a.col(j) /= inst.a.col(j).norm();

  // sprandn-style planted vector with about 100/n density.
  const double density = std::min(1.0, 100.0 / n);
  inst.y_star = Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    if (rng.uniform() < density) inst.y_star[j] = rng.normal();

  const double noise_std = std::sqrt(1e-3);
  inst.noise = noise_std * rng.gaussian_vector(m);
  inst.b = inst.a * inst.y_star + inst.noise;
  inst.sigma = 0.1;

  const LassoParams p = lasso_params(0.5);
  inst.spec = make_lasso_spec(inst.a, inst.b, inst.sigma, p.beta1, p.beta2, p.tau1, 0.5);
  return inst;
}

LassoParams lasso_params(double tau2) {
  if (!(tau2 > 0.0) || tau2 >= 2.0 || tau2 == 1.0) {
    std::ostringstream msg;
    msg << "lasso_params: tau2 = " << tau2 << " outside (0,1) u (1,2)";
    throw std::domain_error(msg.str());
  }
  LassoParams p;
  p.beta1 = (2.0 - tau2) / (tau2 * std::abs(tau2 - 1.0));
  p.beta2 = p.beta1;
  p.tau1 = std::abs(tau2 - 1.0) / (5.0 * p.beta1 * tau2) + 0.8;
  return p;
}

Iterate random_start(const ProblemSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Iterate w;
  w.x_blocks.reserve(spec.blocks.size());
  for (const auto& blk : spec.blocks) w.x_blocks.push_back(rng.gaussian_vector(blk.cols()));
  w.lambda = rng.gaussian_vector(spec.rows());
  return w;
}

namespace {

/// Copy of the spec whose tau values are raised above their spectral
/// bounds where needed, so the reference run carries a positive definite
/// proximal term even when the source parameters do not.
ProblemSpec certified_copy(const ProblemSpec& spec) {
  ProblemSpec out = spec;
  out.proximal_count = spec.block_count();
  for (auto& blk : out.blocks) {
    if (auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode)) {
      const double bound = blk.beta * spectral_norm_gram(blk.matrix);
      if (img->tau <= bound) img->tau = kTauSafety * std::max(bound, 1e-12);
    } else if (auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode)) {
      const double bound = spectral_norm_gram(blk.matrix);
      if (bsg->tau <= bound) bsg->tau = kTauSafety * std::max(bound, 1e-12);
    }
    // GeneralSpd is kept as given; an indefinite Q fails at solve time.
  }
  return out;
}

}  // namespace

ReferenceSolution reference_solution(const ProblemSpec& spec, std::uint64_t seed) {
  ProblemSpec run_spec = certified_copy(spec);

  SolverConfig cfg;
  cfg.algorithm =
      run_spec.block_count() == 1 ? Algorithm::PdpAlm : Algorithm::SplittingPdp;
  cfg.dual_step_mode = DualStepMode::ProofConsistent;
  cfg.tol = 1e-13;
  cfg.max_iter = 1000000;
  cfg.project_dual = true;

  SolveResult res = solve(run_spec, cfg, random_start(run_spec, seed));

  ReferenceSolution ref;
  ref.point = res.final;
  ref.iterations = res.iterations;
  ref.residual = vi_residual(spec, res.final);
  if (!res.converged && ref.residual > 1e-8) {
    std::ostringstream msg;
    msg << "reference_solution: cap reached with vi residual " << ref.residual;
    throw NoReferenceError(msg.str());
  }
  return ref;
}

}  // namespace pdp
