#include "pdp/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "pdp/diagnostics.hpp"
#include "pdp/prox.hpp"

namespace pdp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Vector constraint_residual(const ProblemSpec& spec, const Iterate& w) {
  Vector r = spec.blocks[0].matrix * w.x_blocks[0] - spec.rhs;
  for (int i = 1; i < spec.block_count(); ++i) r += spec.blocks[i].matrix * w.x_blocks[i];
  return r;
}

Vector dual_step(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                 const Vector& residual, double step_size) {
  Vector lam = cur.lambda - step_size * residual;
  if (spec.sense == ConstraintSense::InequalityGE && cfg.project_dual)
    lam = project_nonneg(lam);
  return lam;
}

double splitting_dual_step_size(const ProblemSpec& spec, DualStepMode mode) {
  if (spec.block_count() == 1) return spec.blocks[0].beta;
  if (mode == DualStepMode::PaperLiteral) {
    double s = 0.0;
    for (const auto& blk : spec.blocks) s += blk.beta;
    return s;
  }
  double inv = 0.0;
  for (const auto& blk : spec.blocks) inv += 1.0 / blk.beta;
  return 1.0 / inv;
}

Matrix block_metric(const BlockSpec& blk, bool with_q) {
  Matrix m = blk.beta * (blk.matrix.transpose() * blk.matrix);
  if (with_q) m += std::get<GeneralSpd>(blk.prox_mode).q;
  return m;
}

/// argmin theta(x) - <g, x> + 1/2 ||x - x0||^2_{beta A'A + Q}. The two
/// Gram-cancelling modes reduce to a prox call; GeneralSpd goes through
/// the metric solver (cached one when provided).
Vector proximal_block_update(const BlockSpec& blk, const Vector& g, const Vector& x0,
                             const MetricSubproblemSolver* cached) {
  if (const auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode)) {
    const double rho = img->tau;
    return blk.objective->prox(x0 + g / rho, rho);
  }
  if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode)) {
    const double rho = blk.beta * bsg->tau;
    return blk.objective->prox(x0 + g / rho, rho);
  }
  if (cached) return cached->solve(g, x0);
  return blk.objective->make_metric_solver(block_metric(blk, true))->solve(g, x0);
}

/// Same subproblem without the Q term (metric beta A'A).
Vector penalty_block_update(const BlockSpec& blk, const Vector& g, const Vector& x0,
                            const MetricSubproblemSolver* cached) {
  if (cached) return cached->solve(g, x0);
  return blk.objective->make_metric_solver(block_metric(blk, false))->solve(g, x0);
}

void reject_feasible_sets(const ProblemSpec& spec) {
  for (const auto& blk : spec.blocks)
    if (blk.feasible_set)
      throw UnsupportedConfigError("proper feasible sets are not supported");
}

const AdmmParams& admm_params(const SolverConfig& cfg) {
  if (!cfg.admm)
    throw UnsupportedConfigError("linearized ADMM requires SolverConfig::admm parameters");
  return *cfg.admm;
}

/// Per-solve cached state: the dual factor for the balanced variants and
/// the per-block metric factorizations for the slow block paths.
struct StepState {
  std::optional<DualSystemFactor> factor;
  std::vector<std::unique_ptr<MetricSubproblemSolver>> block_solvers;
  bool a1_identity = false;

  const MetricSubproblemSolver* solver_for(int i) const {
    return block_solvers.empty() ? nullptr : block_solvers[i].get();
  }
};

StepState make_step_state(const ProblemSpec& spec, const SolverConfig& cfg) {
  StepState st;
  switch (cfg.algorithm) {
    case Algorithm::BalancedAlm:
    case Algorithm::DpBalm:
      require(spec.block_count() == 1, "balanced variants need a one-block spec");
      require(cfg.delta > 0.0, "balanced variants need delta > 0");
      st.factor.emplace(spec.blocks[0].matrix, spec.blocks[0].beta, cfg.delta);
      break;
    case Algorithm::PdpAlm:
    case Algorithm::PenaltyAlm:
      require(spec.block_count() == 1, "one-block algorithm on a multi-block spec");
      [[fallthrough]];
    case Algorithm::SplittingPdp: {
      st.block_solvers.resize(spec.blocks.size());
      for (std::size_t i = 0; i < spec.blocks.size(); ++i)
        if (std::holds_alternative<GeneralSpd>(spec.blocks[i].prox_mode))
          st.block_solvers[i] =
              spec.blocks[i].objective->make_metric_solver(block_metric(spec.blocks[i], true));
      break;
    }
    case Algorithm::PartialProxPdp: {
      st.block_solvers.resize(spec.blocks.size());
      for (int i = 0; i < spec.block_count(); ++i) {
        const auto& blk = spec.blocks[i];
        if (i >= spec.proximal_count)
          st.block_solvers[i] = blk.objective->make_metric_solver(block_metric(blk, false));
        else if (std::holds_alternative<GeneralSpd>(blk.prox_mode))
          st.block_solvers[i] = blk.objective->make_metric_solver(block_metric(blk, true));
      }
      break;
    }
    case Algorithm::LinearizedAdmm: {
      require(spec.block_count() == 2, "linearized ADMM needs a two-block spec");
      const AdmmParams& p = admm_params(cfg);
      require(p.beta > 0.0 && p.tau > 0.0, "linearized ADMM needs positive beta and tau");
      const auto& b1 = spec.blocks[0];
      st.a1_identity = b1.matrix.rows() == b1.matrix.cols() && b1.matrix.isIdentity(0.0);
      if (!st.a1_identity) {
        st.block_solvers.resize(2);
        Matrix m1 = p.beta * (b1.matrix.transpose() * b1.matrix);
        st.block_solvers[0] = b1.objective->make_metric_solver(m1);
      }
      break;
    }
  }
  return st;
}

Iterate step_pdp_alm_impl(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                          const StepState& st) {
  const BlockSpec& blk = spec.blocks[0];
  Vector r = blk.matrix * cur.x_blocks[0] - spec.rhs;
  Iterate next = cur;
  next.lambda = dual_step(spec, cur, cfg, r, blk.beta);
  Vector g = blk.matrix.transpose() * (2.0 * next.lambda - cur.lambda);
  next.x_blocks[0] = proximal_block_update(blk, g, cur.x_blocks[0], st.solver_for(0));
  return next;
}

Iterate step_balanced_alm_impl(const ProblemSpec& spec, const Iterate& cur,
                               const SolverConfig& cfg, const DualSystemFactor& factor) {
  const BlockSpec& blk = spec.blocks[0];
  Iterate next = cur;
  next.x_blocks[0] =
      blk.objective->prox(cur.x_blocks[0] + blk.matrix.transpose() * cur.lambda / blk.beta,
                          blk.beta);
  Vector r = blk.matrix * (2.0 * next.x_blocks[0] - cur.x_blocks[0]) - spec.rhs;
  next.lambda = cur.lambda - factor.solve(r);
  if (spec.sense == ConstraintSense::InequalityGE && cfg.project_dual)
    next.lambda = project_nonneg(next.lambda);
  return next;
}

Iterate step_dp_balm_impl(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                          const DualSystemFactor& factor) {
  const BlockSpec& blk = spec.blocks[0];
  Iterate next = cur;
  Vector r = blk.matrix * cur.x_blocks[0] - spec.rhs;
  next.lambda = cur.lambda - factor.solve(r);
  if (spec.sense == ConstraintSense::InequalityGE && cfg.project_dual)
    next.lambda = project_nonneg(next.lambda);
  next.x_blocks[0] = blk.objective->prox(
      cur.x_blocks[0] + blk.matrix.transpose() * (2.0 * next.lambda - cur.lambda) / blk.beta,
      blk.beta);
  return next;
}

Iterate step_penalty_alm_impl(const ProblemSpec& spec, const Iterate& cur,
                              const SolverConfig& cfg, const StepState& st) {
  const BlockSpec& blk = spec.blocks[0];
  Iterate next = cur;
  Vector g = blk.matrix.transpose() * cur.lambda;
  next.x_blocks[0] = proximal_block_update(blk, g, cur.x_blocks[0], st.solver_for(0));
  Vector r = blk.matrix * (2.0 * next.x_blocks[0] - cur.x_blocks[0]) - spec.rhs;
  next.lambda = dual_step(spec, cur, cfg, r, blk.beta);
  return next;
}

Iterate step_splitting_pdp_impl(const ProblemSpec& spec, const Iterate& cur,
                                const SolverConfig& cfg, const StepState& st) {
  Iterate next = cur;
  Vector r = constraint_residual(spec, cur);
  next.lambda = dual_step(spec, cur, cfg, r, splitting_dual_step_size(spec, cfg.dual_step_mode));
  Vector mult = 2.0 * next.lambda - cur.lambda;
  for (int i = 0; i < spec.block_count(); ++i) {
    const BlockSpec& blk = spec.blocks[i];
    next.x_blocks[i] = proximal_block_update(blk, blk.matrix.transpose() * mult,
                                             cur.x_blocks[i], st.solver_for(i));
  }
  return next;
}

Iterate step_partial_prox_pdp_impl(const ProblemSpec& spec, const Iterate& cur,
                                   const SolverConfig& cfg, const StepState& st) {
  Iterate next = cur;
  Vector r = constraint_residual(spec, cur);
  next.lambda = dual_step(spec, cur, cfg, r, splitting_dual_step_size(spec, cfg.dual_step_mode));
  Vector mult = 2.0 * next.lambda - cur.lambda;
  for (int i = 0; i < spec.block_count(); ++i) {
    const BlockSpec& blk = spec.blocks[i];
    Vector g = blk.matrix.transpose() * mult;
    next.x_blocks[i] = i < spec.proximal_count
                           ? proximal_block_update(blk, g, cur.x_blocks[i], st.solver_for(i))
                           : penalty_block_update(blk, g, cur.x_blocks[i], st.solver_for(i));
  }
  return next;
}

Iterate step_linearized_admm_impl(const ProblemSpec& spec, const Iterate& cur,
                                  const SolverConfig& cfg, const StepState& st) {
  const AdmmParams& p = admm_params(cfg);
  const BlockSpec& b1 = spec.blocks[0];
  const BlockSpec& b2 = spec.blocks[1];
  Iterate next = cur;

  // Block 1, exact: argmin th1 - <lambda, A1 x1> + (beta/2)||A1 x1 - d||^2.
  Vector d = spec.rhs - b2.matrix * cur.x_blocks[1];
  if (st.a1_identity) {
    next.x_blocks[0] = b1.objective->prox(d + cur.lambda / p.beta, p.beta);
  } else {
    Vector g = b1.matrix.transpose() * (cur.lambda + p.beta * d);
    next.x_blocks[0] = st.solver_for(0)->solve(g, Vector::Zero(b1.cols()));
  }

  // Block 2, linearized penalty: gradient step through the prox of th2.
  Vector infeas = b1.matrix * next.x_blocks[0] + b2.matrix * cur.x_blocks[1] - spec.rhs;
  Vector grad = b2.matrix.transpose() * (p.beta * infeas - cur.lambda);
  next.x_blocks[1] = b2.objective->prox(cur.x_blocks[1] - grad / p.tau, p.tau);

  Vector r = b1.matrix * next.x_blocks[0] + b2.matrix * next.x_blocks[1] - spec.rhs;
  next.lambda = cur.lambda - p.beta * r;
  if (spec.sense == ConstraintSense::InequalityGE && cfg.project_dual)
    next.lambda = project_nonneg(next.lambda);
  return next;
}

Iterate apply_step(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                   const StepState& st) {
  switch (cfg.algorithm) {
    case Algorithm::PdpAlm: return step_pdp_alm_impl(spec, cur, cfg, st);
    case Algorithm::BalancedAlm: return step_balanced_alm_impl(spec, cur, cfg, *st.factor);
    case Algorithm::DpBalm: return step_dp_balm_impl(spec, cur, cfg, *st.factor);
    case Algorithm::PenaltyAlm: return step_penalty_alm_impl(spec, cur, cfg, st);
    case Algorithm::SplittingPdp: return step_splitting_pdp_impl(spec, cur, cfg, st);
    case Algorithm::PartialProxPdp: return step_partial_prox_pdp_impl(spec, cur, cfg, st);
    case Algorithm::LinearizedAdmm: return step_linearized_admm_impl(spec, cur, cfg, st);
  }
  throw std::logic_error("unknown algorithm");
}

/// The H metric used for trace step lengths, when the algorithm has one
/// and the spec's proximal parameters actually make it positive
/// (semi)definite. Otherwise the trace falls back to Euclidean lengths.
std::optional<HMetric> trace_metric(const ProblemSpec& spec, const SolverConfig& cfg) {
  HVariant variant;
  switch (cfg.algorithm) {
    case Algorithm::PdpAlm: variant = HVariant::SingleBlock; break;
    case Algorithm::SplittingPdp: variant = HVariant::Splitting; break;
    case Algorithm::PartialProxPdp: variant = HVariant::PartialProx; break;
    default: return std::nullopt;
  }
  const int prox_blocks = cfg.algorithm == Algorithm::PartialProxPdp ? spec.proximal_count
                                                                     : spec.block_count();
  for (int i = 0; i < prox_blocks; ++i) {
    const auto& blk = spec.blocks[i];
    if (const auto* img = std::get_if<IdentityMinusGram>(&blk.prox_mode)) {
      if (img->tau <= blk.beta * spectral_norm_gram(blk.matrix)) return std::nullopt;
    } else if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&blk.prox_mode)) {
      if (bsg->tau <= spectral_norm_gram(blk.matrix)) return std::nullopt;
    } else {
      Eigen::LLT<Matrix> llt(std::get<GeneralSpd>(blk.prox_mode).q);
      if (llt.info() != Eigen::Success) return std::nullopt;
    }
  }
  return HMetric(spec, variant);
}

double euclidean_step_sq(const Iterate& d) {
  double s = d.lambda.squaredNorm();
  for (const auto& x : d.x_blocks) s += x.squaredNorm();
  return s;
}

}  // namespace

DualSystemFactor::DualSystemFactor(const Matrix& a, double beta, double delta) {
  Matrix system = a * a.transpose() / beta;
  system.diagonal().array() += delta;
  llt_.compute(system);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("dual system factorization failed");
}

Vector DualSystemFactor::solve(const Vector& rhs) const { return llt_.solve(rhs); }

Iterate step_pdp_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg) {
  require(spec.block_count() == 1 && cur.matches(spec), "step_pdp_alm: one-block spec required");
  reject_feasible_sets(spec);
  StepState st = make_step_state(spec, cfg);
  return step_pdp_alm_impl(spec, cur, cfg, st);
}

Iterate step_balanced_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                          const DualSystemFactor& factor) {
  require(spec.block_count() == 1 && cur.matches(spec),
          "step_balanced_alm: one-block spec required");
  reject_feasible_sets(spec);
  return step_balanced_alm_impl(spec, cur, cfg, factor);
}

Iterate step_dp_balm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                     const DualSystemFactor& factor) {
  require(spec.block_count() == 1 && cur.matches(spec), "step_dp_balm: one-block spec required");
  reject_feasible_sets(spec);
  return step_dp_balm_impl(spec, cur, cfg, factor);
}

Iterate step_penalty_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg) {
  require(spec.block_count() == 1 && cur.matches(spec),
          "step_penalty_alm: one-block spec required");
  reject_feasible_sets(spec);
  StepState st = make_step_state(spec, cfg);
  return step_penalty_alm_impl(spec, cur, cfg, st);
}

Iterate step_splitting_pdp(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg) {
  require(spec.block_count() >= 1 && cur.matches(spec), "step_splitting_pdp: dimension mismatch");
  reject_feasible_sets(spec);
  SolverConfig c = cfg;
  c.algorithm = Algorithm::SplittingPdp;
  StepState st = make_step_state(spec, c);
  return step_splitting_pdp_impl(spec, cur, c, st);
}

Iterate step_partial_prox_pdp(const ProblemSpec& spec, const Iterate& cur,
                              const SolverConfig& cfg) {
  require(spec.block_count() >= 1 && cur.matches(spec),
          "step_partial_prox_pdp: dimension mismatch");
  require(spec.proximal_count >= 0 && spec.proximal_count <= spec.block_count(),
          "step_partial_prox_pdp: proximal_count out of range");
  reject_feasible_sets(spec);
  SolverConfig c = cfg;
  c.algorithm = Algorithm::PartialProxPdp;
  StepState st = make_step_state(spec, c);
  return step_partial_prox_pdp_impl(spec, cur, c, st);
}

Iterate step_linearized_admm(const ProblemSpec& spec, const Iterate& cur,
                             const SolverConfig& cfg) {
  require(cur.matches(spec), "step_linearized_admm: dimension mismatch");
  if (spec.block_count() != 2)
    throw UnsupportedConfigError("linearized ADMM needs exactly two blocks");
  reject_feasible_sets(spec);
  SolverConfig c = cfg;
  c.algorithm = Algorithm::LinearizedAdmm;
  StepState st = make_step_state(spec, c);
  return step_linearized_admm_impl(spec, cur, c, st);
}

SolveResult solve(const ProblemSpec& spec, const SolverConfig& cfg, const Iterate& init) {
  require(init.matches(spec), "solve: init does not match the spec");
  require(cfg.tol > 0.0, "solve: tol must be positive");
  require(cfg.max_iter >= 1, "solve: max_iter must be at least 1");
  reject_feasible_sets(spec);

  StepState st = make_step_state(spec, cfg);
  std::optional<HMetric> metric = trace_metric(spec, cfg);

  SolveResult res;
  res.trace.reserve(std::min(cfg.max_iter, 1 << 20));
  if (cfg.record_iterates) res.iterates.push_back(init);

  Iterate cur = init;
  Iterate ergodic_sum = Iterate::zeros(spec);
  double min_residual = std::numeric_limits<double>::infinity();
  const auto t0 = std::chrono::steady_clock::now();

  for (int k = 1; k <= cfg.max_iter; ++k) {
    Iterate next = apply_step(spec, cur, cfg, st);
    if (!next.all_finite()) {
      res.status = SolveStatus::Diverged;
      res.divergence_note = "non-finite iterate at iteration " + std::to_string(k);
      break;
    }

    Iterate delta = next - cur;
    double residual = delta.lambda.norm();
    for (const auto& dx : delta.x_blocks) residual = std::max(residual, dx.norm());

    TraceRecord rec;
    rec.iter = k;
    rec.residual_R = residual;
    rec.cr = constraint_residual(spec, next).squaredNorm();
    rec.objective = objective_value(spec, next);
    rec.step_h_norm_sq = metric ? std::max(0.0, metric->quadratic_form(delta))
                                : euclidean_step_sq(delta);
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.trace.push_back(rec);

    if (cfg.record_iterates) res.iterates.push_back(next);
    if (cfg.ergodic) ergodic_sum += next;
    res.iterations = k;
    cur = next;

    min_residual = std::min(min_residual, residual);
    if (residual > 1e6 * min_residual) {
      res.status = SolveStatus::Diverged;
      std::ostringstream note;
      note << "residual R = " << residual << " exceeds 1e6 x running minimum " << min_residual;
      res.divergence_note = note.str();
      break;
    }
    if (residual < cfg.tol) {
      res.status = SolveStatus::Converged;
      res.converged = true;
      break;
    }
  }

  res.final = cur;
  if (cfg.ergodic && res.iterations > 0)
    res.ergodic_point = (1.0 / res.iterations) * ergodic_sum;
  return res;
}

}  // namespace pdp
