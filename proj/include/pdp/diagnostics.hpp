#ifndef PDP_DIAGNOSTICS_HPP_
#define PDP_DIAGNOSTICS_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

/// Which block matrix H the metric represents:
///   SingleBlock:  [ beta A'A + Q, -A';  -A, (1/beta) I ]           (one block)
///   Splitting:    block-diagonal beta_i A_i'A_i + Q_i, corner sum(1/beta_i) I
///   PartialProx:  as Splitting but Q_i only on the leading proximal blocks
enum class HVariant { SingleBlock, Splitting, PartialProx };

/// The quadratic form omega' H omega, evaluated matrix-free through the
/// rank-structured decomposition
///   q(w) = sum_i || lambda/sqrt(beta_i) - sqrt(beta_i) A_i x_i ||^2
///        + sum_{proximal i} x_i' Q_i x_i.
/// A second, independent evaluation route through the block-matrix
/// expansion and a dense assembly for small instances are provided for
/// cross-checks.
class HMetric {
 public:
  HMetric(const ProblemSpec& spec, HVariant variant);

  double quadratic_form(const Iterate& w) const;

  /// Same value through the block-matrix expansion
  ///   sum_i x_i'(beta_i A_i'A_i + Q_i) x_i - 2 lambda' sum_i A_i x_i
  ///   + sum_i (1/beta_i) ||lambda||^2.
  double quadratic_form_block(const Iterate& w) const;

  /// Dense (n+m) x (n+m) assembly; intended for small cross-checks only.
  Matrix dense() const;

  const ProblemSpec& spec() const { return *spec_; }
  HVariant variant() const { return variant_; }
  /// Number of leading blocks whose Q term participates.
  int proximal_blocks() const;

 private:
  double q_term(int i, const Vector& x) const;

  const ProblemSpec* spec_;
  HVariant variant_;
};

/// The affine operator F(omega) = (-A_1'lambda, ..., -A_p'lambda,
/// sum A_i x_i - b) of the saddle-point characterization. Its linear part
/// is skew-symmetric, so (w - v)'(F(w) - F(v)) vanishes identically.
Iterate apply_F(const ProblemSpec& spec, const Iterate& omega);

/// One-step contraction certificate in the H metric:
///   ||next - ref||_H^2 <= ||prev - ref||_H^2 - ||prev - next||_H^2
/// with slack 1e-9 (1 + ||prev - ref||_H^2). ref should be a (numerical)
/// saddle point; inexactness in ref is absorbed by the slack.
struct StepCertificate {
  double dist_prev_sq = 0.0;
  double dist_next_sq = 0.0;
  double step_sq = 0.0;
  double slack = 0.0;
  bool pass = false;
};

StepCertificate check_step_certificate(const HMetric& metric, const Iterate& prev,
                                       const Iterate& next, const Iterate& ref);

/// Writes certificate records as JSON lines:
/// {"k": int, "dist_prev": r, "dist_next": r, "step": r, "pass": bool}
/// (squared H-distances, matching the contraction inequality).
void write_certificates_jsonl(std::ostream& os, std::span<const StepCertificate> certs,
                              int first_iter = 1);

/// Computable saddle-point residual: the max of
///  - primal feasibility: ||sum A_i x_i - b||, or for >= constraints the
///    norm of the violated part plus the complementarity gap
///    |lambda' (sum A_i x_i - b)|,
///  - the prox fixed-point gap ||x_i - prox_{theta_i}(x_i + A_i'lambda, 1)||
///    per block (a computable stand-in for the subdifferential inclusion),
///  - the negative part of lambda for >= constraints.
/// Zero exactly at saddle points.
double vi_residual(const ProblemSpec& spec, const Iterate& omega);

/// Ergodic O(1/t) rate certificate. For the running averages
/// avg_t = mean(trace[0..t]) of the post-update iterates, checks
///   mean theta(x^{k+1}) - theta(x*) + (avg_t - ref)' F(ref)
///     <= ||ref - omega0||_H^2 / (2(t+1)) + 1e-9
/// for every t. theta_values must hold sum_i theta_i at trace[k].
struct ErgodicGapReport {
  std::vector<double> gap;
  std::vector<double> bound;
  int first_violation = -1;  // -1 when every t passes
  bool pass = true;
};

ErgodicGapReport ergodic_gap_check(const HMetric& metric, const Iterate& omega0,
                                   std::span<const Iterate> trace, const Iterate& ref,
                                   std::span<const double> theta_values);

}  // namespace pdp

#endif  // PDP_DIAGNOSTICS_HPP_
