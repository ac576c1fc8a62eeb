#ifndef PDP_SOLVERS_HPP_
#define PDP_SOLVERS_HPP_

#include <Eigen/Cholesky>

#include <optional>
#include <string>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

/// Cholesky factor of (1/beta) A A' + delta I, the dual system of the
/// balanced variants. SPD for any beta > 0, delta > 0; factored once per
/// solve and reused every iteration.
class DualSystemFactor {
 public:
  DualSystemFactor(const Matrix& a, double beta, double delta);
  Vector solve(const Vector& rhs) const;

 private:
  Eigen::LLT<Matrix> llt_;
};

enum class SolveStatus { Converged, IterationLimit, Diverged };

struct SolveResult {
  Iterate final;
  std::vector<TraceRecord> trace;
  bool converged = false;
  int iterations = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  std::string divergence_note;
  /// Arithmetic mean of the post-update iterates omega^1..omega^K;
  /// present when SolverConfig::ergodic is set.
  std::optional<Iterate> ergodic_point;
  /// omega^0..omega^K when SolverConfig::record_iterates is set.
  std::vector<Iterate> iterates;
};

// One-step transition maps. Each returns omega^{k+1} from omega^k.
// Preconditions (block count, positive parameters) are the caller's to
// meet; dimension mismatches throw std::invalid_argument.

/// Penalty dual-primal ALM, one block:
///   lambda+ = lambda - beta (A x - b)      [projected for >= constraints]
///   x+      = argmin theta(x) - <2 lambda+ - lambda, A x>
///                    + 1/2 ||x - x^k||^2_{beta A'A + Q}
Iterate step_pdp_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg);

/// Balanced ALM, one block (primal first, dual system solve):
///   x+      = prox_theta(x^k + (1/beta) A' lambda, beta)
///   lambda+ = lambda - F^{-1} (A (2x+ - x) - b)
Iterate step_balanced_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                          const DualSystemFactor& factor);

/// Dual-primal balanced ALM, one block (dual system solve first).
Iterate step_dp_balm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg,
                     const DualSystemFactor& factor);

/// Penalty ALM, one block (primal first with the lagged multiplier):
///   x+      = argmin theta(x) - <lambda, A x> + 1/2 ||x - x^k||^2_{beta A'A + Q}
///   lambda+ = lambda - beta (A (2x+ - x) - b)
Iterate step_penalty_alm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg);

/// Splitting PDP, every block proximal. The dual step size is
/// sum(beta_i) under PaperLiteral and 1/sum(1/beta_i) under
/// ProofConsistent; for one block both equal beta.
Iterate step_splitting_pdp(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg);

/// Partial-proximal PDP: blocks below proximal_count keep the Q term,
/// the rest minimize against the pure penalty metric beta_i A_i'A_i
/// (which validate() requires to be nonsingular).
Iterate step_partial_prox_pdp(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg);

/// Two-block baseline: exact minimization on block 1, linearized
/// quadratic penalty with weight cfg.admm->tau on block 2, dual ascent
/// with penalty cfg.admm->beta. Convergence needs tau >= beta ||A2'A2||.
Iterate step_linearized_admm(const ProblemSpec& spec, const Iterate& cur, const SolverConfig& cfg);

/// Outer loop: applies the configured step map until
/// R(k) = max{ step norms of every block and the multiplier } < cfg.tol
/// or cfg.max_iter is reached. Records a TraceRecord per iteration.
/// Divergence (non-finite iterate, or R(k) above 1e6 times its running
/// minimum) stops the loop with the last finite iterate kept.
SolveResult solve(const ProblemSpec& spec, const SolverConfig& cfg, const Iterate& init);

}  // namespace pdp

#endif  // PDP_SOLVERS_HPP_
