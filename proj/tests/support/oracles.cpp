#include "support/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numeric>

#include "pdp/bench.hpp"
#include "pdp/prox.hpp"

namespace pdp::testing {

double grid_minimize_arg(const std::function<double(double)>& f, double lo, double hi,
                         double step) {
  double best_x = lo;
  double best = f(lo);
  for (double x = lo + step; x <= hi; x += step) {
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double a = best_x - step;
  double c = best_x + step;
  for (int i = 0; i < 120; ++i) {
    const double m1 = a + (c - a) / 3.0;
    const double m2 = c - (c - a) / 3.0;
    if (f(m1) < f(m2))
      c = m2;
    else
      a = m1;
  }
  return 0.5 * (a + c);
}

Vector grid_prox_l1(const Vector& t, double delta) {
  Vector out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double ti = t[i];
    auto f = [ti, delta](double y) { return 0.5 * (y - ti) * (y - ti) + delta * std::abs(y); };
    const double lo = std::min(ti, 0.0) - 1.0;
    const double hi = std::max(ti, 0.0) + 1.0;
    out[i] = grid_minimize_arg(f, lo, hi, 1e-4);
  }
  return out;
}

Vector grid_prox_half_sq(const Vector& v, double rho, const Vector& b) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double vi = v[i];
    const double bi = b[i];
    auto f = [vi, bi, rho](double y) {
      return 0.5 * (y - bi) * (y - bi) + 0.5 * rho * (y - vi) * (y - vi);
    };
    const double lo = std::min(vi, bi) - 1.0;
    const double hi = std::max(vi, bi) + 1.0;
    out[i] = grid_minimize_arg(f, lo, hi, 1e-4);
  }
  return out;
}

double lp_basis_pursuit_optimum(const Matrix& a, const Vector& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> subset(m);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    Matrix basis(m, m);
    for (int j = 0; j < m; ++j) basis.col(j) = a.col(subset[j]);
    Eigen::FullPivLU<Matrix> lu(basis);
    if (lu.isInvertible()) {
      Vector xs = lu.solve(b);
      if ((basis * xs - b).norm() <= 1e-9 * (1.0 + b.norm()))
        best = std::min(best, xs.lpNorm<1>());
    }
    // next lexicographic m-subset of {0..n-1}
    int i = m - 1;
    while (i >= 0 && subset[i] == n - m + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
  }
  return best;
}

namespace {

double certified_tau(const Matrix& a, double beta) {
  return 1.02 * beta * spectral_norm_gram(a) + 1e-6;
}

BlockSpec make_block(std::shared_ptr<const ProxOracle> objective, Matrix a, double beta,
                     double tau) {
  BlockSpec blk;
  blk.objective = std::move(objective);
  blk.matrix = std::move(a);
  blk.beta = beta;
  blk.prox_mode = IdentityMinusGram{tau};
  return blk;
}

}  // namespace

SaddleInstance make_l1_saddle(int m, int n, std::uint64_t seed, double beta, double tau) {
  Rng rng(seed);
  SaddleInstance out;
  Matrix a = rng.gaussian_matrix(m, n);
  Vector lam = rng.gaussian_vector(m);
  Vector g = a.transpose() * lam;
  Eigen::Index peak;
  g.cwiseAbs().maxCoeff(&peak);
  lam /= std::abs(g[peak]);  // now |(A'lam)_peak| = 1, strictly below 1 elsewhere
  g = a.transpose() * lam;

  Vector x = Vector::Zero(n);
  x[peak] = (0.5 + rng.uniform()) * (g[peak] > 0 ? 1.0 : -1.0);

  out.spec.blocks.push_back(make_block(std::make_shared<L1Norm>(), a, beta,
                                       tau > 0 ? tau : certified_tau(a, beta)));
  out.spec.rhs = a * x;
  out.spec.sense = ConstraintSense::Equality;
  out.spec.proximal_count = 1;
  out.saddle.x_blocks = {x};
  out.saddle.lambda = lam;
  return out;
}

SaddleInstance make_zero_saddle(int m, int n, std::uint64_t seed, double beta, double tau) {
  Rng rng(seed);
  SaddleInstance out;
  Matrix a = rng.gaussian_matrix(m, n);
  Vector x = rng.gaussian_vector(n);
  out.spec.blocks.push_back(make_block(std::make_shared<ZeroObjective>(), a, beta,
                                       tau > 0 ? tau : certified_tau(a, beta)));
  out.spec.rhs = a * x;
  out.spec.sense = ConstraintSense::Equality;
  out.spec.proximal_count = 1;
  out.saddle.x_blocks = {x};
  out.saddle.lambda = Vector::Zero(m);
  return out;
}

SaddleInstance make_half_sq_saddle_ge(int m, int n, std::uint64_t seed, double beta, double tau) {
  Rng rng(seed);
  SaddleInstance out;
  Matrix a = rng.gaussian_matrix(m, n);
  Vector d = rng.gaussian_vector(n);
  Vector lam(m);
  for (int i = 0; i < m; ++i) lam[i] = 0.1 + std::abs(rng.normal());
  Vector x = d + a.transpose() * lam;  // dual feasibility for theta = 1/2||x-d||^2

  out.spec.blocks.push_back(make_block(std::make_shared<HalfSquaredDistance>(d), a, beta,
                                       tau > 0 ? tau : certified_tau(a, beta)));
  out.spec.rhs = a * x;  // all constraints active; complementarity holds
  out.spec.sense = ConstraintSense::InequalityGE;
  out.spec.proximal_count = 1;
  out.saddle.x_blocks = {x};
  out.saddle.lambda = lam;
  return out;
}

SaddleInstance make_two_block_saddle(int m, int n, std::uint64_t seed, double beta1,
                                     double beta2) {
  Rng rng(seed);
  SaddleInstance out;
  Matrix a = rng.gaussian_matrix(m, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) /= a.col(j).norm();
  const double sigma = 0.1;
  Matrix a1 = Matrix::Identity(m, m);
  Matrix a2 = -a;

  Vector lam = rng.gaussian_vector(m);
  Vector g2 = a2.transpose() * lam;
  Eigen::Index peak;
  g2.cwiseAbs().maxCoeff(&peak);
  lam *= sigma / std::abs(g2[peak]);  // sigma * subgradient condition tight at peak
  g2 = a2.transpose() * lam;

  Vector y = Vector::Zero(n);
  y[peak] = (0.5 + rng.uniform()) * (g2[peak] > 0 ? 1.0 : -1.0);

  Vector d = rng.gaussian_vector(m);
  Vector x = d + a1.transpose() * lam;

  BlockSpec b1 = make_block(std::make_shared<HalfSquaredDistance>(d), a1, beta1,
                            certified_tau(a1, beta1));
  BlockSpec b2 = make_block(std::make_shared<ScaledL1Norm>(sigma), a2, beta2,
                            certified_tau(a2, beta2));
  out.spec.blocks = {std::move(b1), std::move(b2)};
  out.spec.rhs = a1 * x + a2 * y;
  out.spec.sense = ConstraintSense::Equality;
  out.spec.proximal_count = 2;
  out.saddle.x_blocks = {x, y};
  out.saddle.lambda = lam;
  return out;
}

ProblemSpec random_one_block_spec(int m, int n, std::uint64_t seed, double beta) {
  Rng rng(seed);
  ProblemSpec spec;
  Matrix a = rng.gaussian_matrix(m, n);
  Vector b = rng.gaussian_vector(m);
  spec.blocks.push_back(make_block(std::make_shared<L1Norm>(), a, beta, certified_tau(a, beta)));
  spec.rhs = b;
  spec.sense = ConstraintSense::Equality;
  spec.proximal_count = 1;
  return spec;
}

ProblemSpec random_multi_block_spec(int m, const std::vector<int>& block_cols, int proximal_count,
                                    std::uint64_t seed) {
  Rng rng(seed);
  ProblemSpec spec;
  for (std::size_t i = 0; i < block_cols.size(); ++i) {
    const int ni = block_cols[i];
    Matrix a = rng.gaussian_matrix(m, ni);
    const double beta = 0.5 + rng.uniform();
    std::shared_ptr<const ProxOracle> theta;
    switch (i % 3) {
      case 0: theta = std::make_shared<L1Norm>(); break;
      case 1: theta = std::make_shared<ZeroObjective>(); break;
      default: theta = std::make_shared<HalfSquaredDistance>(rng.gaussian_vector(ni)); break;
    }
    // non-proximal blocks need metric-prox objectives and full column rank
    if (static_cast<int>(i) >= proximal_count && i % 3 == 0)
      theta = std::make_shared<ZeroObjective>();
    spec.blocks.push_back(make_block(std::move(theta), a, beta, certified_tau(a, beta)));
  }
  spec.rhs = rng.gaussian_vector(m);
  spec.sense = ConstraintSense::Equality;
  spec.proximal_count = proximal_count;
  return spec;
}

Iterate bp_pdp_transcription(const Matrix& a, const Vector& b, double beta, double tau,
                             const Iterate& cur) {
  Iterate next = cur;
  next.lambda = cur.lambda - beta * (a * cur.x_blocks[0] - b);
  Vector center = cur.x_blocks[0] + a.transpose() * (2.0 * next.lambda - cur.lambda) / tau;
  next.x_blocks[0] = soft_threshold(center, 1.0 / tau);
  return next;
}

Iterate dp_balm_transcription(const Matrix& a, const Vector& b, double tau, double delta,
                              const Iterate& cur) {
  Iterate next = cur;
  Matrix system = a * a.transpose() / tau;
  system.diagonal().array() += delta;
  next.lambda = cur.lambda - system.fullPivLu().solve(a * cur.x_blocks[0] - b);
  Vector center = cur.x_blocks[0] + a.transpose() * (2.0 * next.lambda - cur.lambda) / tau;
  next.x_blocks[0] = soft_threshold(center, 1.0 / tau);
  return next;
}

Iterate lasso_splitting_transcription(const Matrix& a, const Vector& b, double sigma,
                                      double beta1, double beta2, double tau1, double tau2,
                                      const Iterate& cur) {
  const Vector& x = cur.x_blocks[0];
  const Vector& y = cur.x_blocks[1];
  Iterate next = cur;
  next.lambda = cur.lambda - (beta1 + beta2) * (x - a * y);
  Vector c = 2.0 * next.lambda - cur.lambda;
  next.x_blocks[0] = (b + tau1 * x + c) / (1.0 + tau1);
  next.x_blocks[1] = soft_threshold(y - a.transpose() * c / tau2, sigma / tau2);
  return next;
}

}  // namespace pdp::testing
