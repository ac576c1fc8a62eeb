#include "pdp/diagnostics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pdp/prox.hpp"

namespace pdp {

HMetric::HMetric(const ProblemSpec& spec, HVariant variant) : spec_(&spec), variant_(variant) {
  if (variant == HVariant::SingleBlock && spec.block_count() != 1)
    throw std::invalid_argument("SingleBlock H metric needs a one-block spec");
}

int HMetric::proximal_blocks() const {
  return variant_ == HVariant::PartialProx ? spec_->proximal_count : spec_->block_count();
}

double HMetric::q_term(int i, const Vector& x) const {
  const BlockSpec& blk = spec_->blocks[i];
  if (const auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode))
    return img->tau * x.squaredNorm() - blk.beta * (blk.matrix * x).squaredNorm();
  if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode))
    return blk.beta * (bsg->tau * x.squaredNorm() - (blk.matrix * x).squaredNorm());
  const Matrix& q = std::get<GeneralSpd>(blk.prox_mode).q;
  return x.dot(q * x);
}

double HMetric::quadratic_form(const Iterate& w) const {
  double total = 0.0;
  const int p1 = proximal_blocks();
  for (int i = 0; i < spec_->block_count(); ++i) {
    const BlockSpec& blk = spec_->blocks[i];
    const double root = std::sqrt(blk.beta);
    total += (w.lambda / root - root * (blk.matrix * w.x_blocks[i])).squaredNorm();
    if (i < p1) total += q_term(i, w.x_blocks[i]);
  }
  return total;
}

double HMetric::quadratic_form_block(const Iterate& w) const {
  double total = 0.0;
  Vector ax_sum = Vector::Zero(spec_->rows());
  double inv_beta_sum = 0.0;
  const int p1 = proximal_blocks();
  for (int i = 0; i < spec_->block_count(); ++i) {
    const BlockSpec& blk = spec_->blocks[i];
    Vector ax = blk.matrix * w.x_blocks[i];
    total += blk.beta * ax.squaredNorm();
    if (i < p1) total += q_term(i, w.x_blocks[i]);
    ax_sum += ax;
    inv_beta_sum += 1.0 / blk.beta;
  }
  total -= 2.0 * w.lambda.dot(ax_sum);
  total += inv_beta_sum * w.lambda.squaredNorm();
  return total;
}

Matrix HMetric::dense() const {
  const Eigen::Index n = spec_->cols();
  const Eigen::Index m = spec_->rows();
  Matrix h = Matrix::Zero(n + m, n + m);
  const int p1 = proximal_blocks();
  Eigen::Index at = 0;
  double inv_beta_sum = 0.0;
  for (int i = 0; i < spec_->block_count(); ++i) {
    const BlockSpec& blk = spec_->blocks[i];
    const Eigen::Index ni = blk.cols();
    Matrix diag = blk.beta * (blk.matrix.transpose() * blk.matrix);
    if (i < p1) {
      if (const auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode))
        diag += img->tau * Matrix::Identity(ni, ni) -
                blk.beta * (blk.matrix.transpose() * blk.matrix);
      else if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode))
        diag += blk.beta * (bsg->tau * Matrix::Identity(ni, ni) -
                            blk.matrix.transpose() * blk.matrix);
      else
        diag += std::get<GeneralSpd>(blk.prox_mode).q;
    }
    h.block(at, at, ni, ni) = diag;
    h.block(at, n, ni, m) = -blk.matrix.transpose();
    h.block(n, at, m, ni) = -blk.matrix;
    inv_beta_sum += 1.0 / blk.beta;
    at += ni;
  }
  h.block(n, n, m, m) = inv_beta_sum * Matrix::Identity(m, m);
  return h;
}

Iterate apply_F(const ProblemSpec& spec, const Iterate& omega) {
  if (!omega.matches(spec)) throw std::invalid_argument("apply_F: dimension mismatch");
  Iterate out = omega;
  Vector ax_sum = Vector::Zero(spec.rows());
  for (int i = 0; i < spec.block_count(); ++i) {
    const BlockSpec& blk = spec.blocks[i];
    out.x_blocks[i] = -(blk.matrix.transpose() * omega.lambda);
    ax_sum += blk.matrix * omega.x_blocks[i];
  }
  out.lambda = ax_sum - spec.rhs;
  return out;
}

StepCertificate check_step_certificate(const HMetric& metric, const Iterate& prev,
                                       const Iterate& next, const Iterate& ref) {
  StepCertificate cert;
  cert.dist_prev_sq = metric.quadratic_form(prev - ref);
  cert.dist_next_sq = metric.quadratic_form(next - ref);
  cert.step_sq = metric.quadratic_form(prev - next);
  cert.slack = 1e-9 * (1.0 + cert.dist_prev_sq);
  cert.pass = cert.dist_next_sq <= cert.dist_prev_sq - cert.step_sq + cert.slack;
  return cert;
}

void write_certificates_jsonl(std::ostream& os, std::span<const StepCertificate> certs,
                              int first_iter) {
  int k = first_iter;
  for (const auto& c : certs) {
    os << "{\"k\": " << k++ << ", \"dist_prev\": " << c.dist_prev_sq
       << ", \"dist_next\": " << c.dist_next_sq << ", \"step\": " << c.step_sq
       << ", \"pass\": " << (c.pass ? "true" : "false") << "}\n";
  }
}

double vi_residual(const ProblemSpec& spec, const Iterate& omega) {
  if (!omega.matches(spec)) throw std::invalid_argument("vi_residual: dimension mismatch");

  Vector r = -spec.rhs;
  for (int i = 0; i < spec.block_count(); ++i)
    r += spec.blocks[i].matrix * omega.x_blocks[i];

  double res;
  if (spec.sense == ConstraintSense::Equality) {
    res = r.norm();
  } else {
    res = project_nonneg(-r).norm();                       // violated part of Ax >= b
    res = std::max(res, std::abs(omega.lambda.dot(r)));    // complementarity
    res = std::max(res, project_nonneg(-omega.lambda).norm());  // multiplier sign
  }

  for (int i = 0; i < spec.block_count(); ++i) {
    const BlockSpec& blk = spec.blocks[i];
    Vector inner = omega.x_blocks[i] + blk.matrix.transpose() * omega.lambda;
    double gap = (omega.x_blocks[i] - blk.objective->prox(inner, 1.0)).norm();
    res = std::max(res, gap);
  }
  return res;
}

ErgodicGapReport ergodic_gap_check(const HMetric& metric, const Iterate& omega0,
                                   std::span<const Iterate> trace, const Iterate& ref,
                                   std::span<const double> theta_values) {
  if (trace.size() != theta_values.size())
    throw std::invalid_argument("ergodic_gap_check: trace and theta_values lengths differ");

  const ProblemSpec& spec = metric.spec();
  const double theta_ref = objective_value(spec, ref);
  const Iterate f_ref = apply_F(spec, ref);
  const double initial_dist_sq = metric.quadratic_form(ref - omega0);

  ErgodicGapReport report;
  report.gap.reserve(trace.size());
  report.bound.reserve(trace.size());

  Iterate avg_sum = Iterate::zeros(spec);
  double theta_sum = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    avg_sum += trace[t];
    theta_sum += theta_values[t];
    const double scale = 1.0 / static_cast<double>(t + 1);
    Iterate avg = scale * avg_sum;
    const double gap = theta_sum * scale - theta_ref + dot(avg - ref, f_ref);
    const double bound = initial_dist_sq / (2.0 * static_cast<double>(t + 1));
    report.gap.push_back(gap);
    report.bound.push_back(bound);
    if (gap > bound + 1e-9 && report.first_violation < 0) {
      report.first_violation = static_cast<int>(t);
      report.pass = false;
    }
  }
  return report;
}

}  // namespace pdp
