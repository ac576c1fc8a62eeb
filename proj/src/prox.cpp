#include "pdp/prox.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace pdp {

namespace {

void require_positive_definite(const Eigen::LDLT<Matrix>& ldlt) {
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
    throw UnsupportedConfigError("metric subproblem: matrix is not positive definite");
}

class LinearMetricSolver final : public MetricSubproblemSolver {
 public:
  explicit LinearMetricSolver(const Matrix& metric) : ldlt_(metric) {
    require_positive_definite(ldlt_);
  }
  // 0 = -g + M(y - x0)  =>  y = x0 + M^{-1} g
  Vector solve(const Vector& g, const Vector& x0) const override { return x0 + ldlt_.solve(g); }

 private:
  Eigen::LDLT<Matrix> ldlt_;
};

class ShiftedMetricSolver final : public MetricSubproblemSolver {
 public:
  ShiftedMetricSolver(const Matrix& metric, Vector target)
      : shifted_(Matrix::Identity(metric.rows(), metric.cols()) + metric),
        ldlt_(shifted_),
        target_(std::move(target)) {
    require_positive_definite(ldlt_);
  }
  // 0 = (y - target) - g + M(y - x0)  =>  (I + M) y = target + g + M x0
  Vector solve(const Vector& g, const Vector& x0) const override {
    Vector rhs = target_ + g + shifted_ * x0 - x0;  // M x0 = (I+M) x0 - x0
    return ldlt_.solve(rhs);
  }

 private:
  Matrix shifted_;
  Eigen::LDLT<Matrix> ldlt_;
  Vector target_;
};

}  // namespace

std::unique_ptr<MetricSubproblemSolver> ProxOracle::make_metric_solver(const Matrix&) const {
  throw UnsupportedConfigError("objective '" + kind() + "' has no metric-prox form");
}

std::unique_ptr<MetricSubproblemSolver> ZeroObjective::make_metric_solver(const Matrix& metric) const {
  return std::make_unique<LinearMetricSolver>(metric);
}

std::unique_ptr<MetricSubproblemSolver> HalfSquaredDistance::make_metric_solver(const Matrix& metric) const {
  return std::make_unique<ShiftedMetricSolver>(metric, target_);
}

Vector L1Norm::prox(const Vector& v, double rho) const { return soft_threshold(v, 1.0 / rho); }

Vector ScaledL1Norm::prox(const Vector& v, double rho) const {
  return soft_threshold(v, sigma_ / rho);
}

Vector HalfSquaredDistance::prox(const Vector& v, double rho) const {
  return prox_half_sq_dist(v, rho, target_);
}

double objective_value(const ProblemSpec& spec, const Iterate& w) {
  double total = 0.0;
  for (int i = 0; i < spec.block_count(); ++i)
    total += spec.blocks[i].objective->evaluate(w.x_blocks[i]);
  return total;
}

Vector soft_threshold(const Vector& t, double delta) {
  Vector out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double mag = std::abs(t[i]) - delta;
    out[i] = mag > 0.0 ? (t[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Vector prox_half_sq_dist(const Vector& v, double rho, const Vector& b) {
  return (b + rho * v) / (1.0 + rho);
}

Vector project_nonneg(const Vector& v) { return v.cwiseMax(0.0); }

double spectral_norm_gram(const Matrix& a) {
  if (a.size() == 0 || a.isZero(0.0)) return 0.0;

  const Eigen::Index n = a.cols();
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));

  // The all-ones start can be annihilated by A; fall back to basis-like
  // deterministic restarts until one survives.
  Vector av = a * v;
  for (Eigen::Index k = 0; k < n && av.norm() == 0.0; ++k) {
    v = Vector::Zero(n);
    v[k] = 1.0;
    av = a * v;
  }
  if (av.norm() == 0.0) return 0.0;

  double rayleigh = av.squaredNorm() / v.squaredNorm();
  constexpr int kMaxSweeps = 5000;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Vector w = a.transpose() * av;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    av = a * v;
    const double next = av.squaredNorm();
    if (std::abs(next - rayleigh) < 1e-10 * std::max(next, 1e-300)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return rayleigh;
}

}  // namespace pdp
