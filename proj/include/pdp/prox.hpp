#ifndef PDP_PROX_HPP_
#define PDP_PROX_HPP_

#include <memory>
#include <string>

#include "pdp/types.hpp"

namespace pdp {

/// Solves  argmin_y theta(y) - <g, y> + 1/2 ||y - x0||_M^2  for a fixed
/// SPD metric M, factored once and reused across iterations.
class MetricSubproblemSolver {
 public:
  virtual ~MetricSubproblemSolver() = default;
  virtual Vector solve(const Vector& g, const Vector& x0) const = 0;
};

/// A closed proper convex objective accessed through its proximal map
///   prox(v, rho) = argmin_y { theta(y) + (rho/2) ||y - v||^2 }.
/// All oracles here are exact (closed form). Oracles are stateless and
/// safe for unrestricted concurrent use.
class ProxOracle {
 public:
  virtual ~ProxOracle() = default;

  virtual double evaluate(const Vector& v) const = 0;
  virtual Vector prox(const Vector& v, double rho) const = 0;

  /// Whether the oracle can minimize against an arbitrary SPD metric.
  virtual bool supports_metric_subproblem() const { return false; }

  /// Factory for the metric subproblem; throws UnsupportedConfigError
  /// when supports_metric_subproblem() is false.
  virtual std::unique_ptr<MetricSubproblemSolver> make_metric_solver(const Matrix& metric) const;

  /// Short kind tag used by the JSON schema ("l1", "scaled_l1", ...).
  virtual std::string kind() const = 0;
};

/// theta == 0. prox is the identity; the metric subproblem is a plain
/// linear solve.
class ZeroObjective final : public ProxOracle {
 public:
  double evaluate(const Vector&) const override { return 0.0; }
  Vector prox(const Vector& v, double) const override { return v; }
  bool supports_metric_subproblem() const override { return true; }
  std::unique_ptr<MetricSubproblemSolver> make_metric_solver(const Matrix& metric) const override;
  std::string kind() const override { return "zero"; }
};

/// theta(x) = ||x||_1.
class L1Norm final : public ProxOracle {
 public:
  double evaluate(const Vector& v) const override { return v.lpNorm<1>(); }
  Vector prox(const Vector& v, double rho) const override;
  std::string kind() const override { return "l1"; }
};

/// theta(x) = sigma * ||x||_1.
class ScaledL1Norm final : public ProxOracle {
 public:
  explicit ScaledL1Norm(double sigma) : sigma_(sigma) {}
  double evaluate(const Vector& v) const override { return sigma_ * v.lpNorm<1>(); }
  Vector prox(const Vector& v, double rho) const override;
  double sigma() const { return sigma_; }
  std::string kind() const override { return "scaled_l1"; }

 private:
  double sigma_;
};

/// theta(x) = 1/2 ||x - target||^2.
class HalfSquaredDistance final : public ProxOracle {
 public:
  explicit HalfSquaredDistance(Vector target) : target_(std::move(target)) {}
  double evaluate(const Vector& v) const override { return 0.5 * (v - target_).squaredNorm(); }
  Vector prox(const Vector& v, double rho) const override;
  bool supports_metric_subproblem() const override { return true; }
  std::unique_ptr<MetricSubproblemSolver> make_metric_solver(const Matrix& metric) const override;
  const Vector& target() const { return target_; }
  std::string kind() const override { return "half_sq_dist"; }

 private:
  Vector target_;
};

/// sum_i theta_i(x_i) for a spec's objectives at a point.
double objective_value(const ProblemSpec& spec, const Iterate& w);

/// Componentwise shrinkage (S_delta(t))_i = (1 - delta/|t_i|)_+ * t_i,
/// extended continuously with S_delta(0) = 0. Equals the prox of
/// delta*||.||_1 at rho = 1; prox of sigma*||.||_1 at rho is
/// soft_threshold(v, sigma/rho).
Vector soft_threshold(const Vector& t, double delta);

/// argmin_y 1/2||y - b||^2 + (rho/2)||y - v||^2 = (b + rho*v)/(1 + rho).
Vector prox_half_sq_dist(const Vector& v, double rho, const Vector& b);

/// Componentwise max(v, 0): projection onto the multiplier set of
/// inequality-constrained problems.
Vector project_nonneg(const Vector& v);

/// Largest eigenvalue of A'A by power iteration (all-ones start,
/// successive Rayleigh quotients within 1e-10 relative, cap 5000 sweeps).
/// Returns 0 for a zero matrix. A start vector that annihilates A
/// triggers a deterministic restart.
double spectral_norm_gram(const Matrix& a);

/// Factor by which auto-derived tau values exceed their spectral bound,
/// keeping strict inequalities strict under estimation error.
inline constexpr double kTauSafety = 1.01;

}  // namespace pdp

#endif  // PDP_PROX_HPP_
