#ifndef PDP_EXPERIMENTS_HPP_
#define PDP_EXPERIMENTS_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

/// A plan that cannot be executed (maps to CLI exit code 3).
class InvalidPlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { BasisPursuit, Lasso, Custom };

/// User-facing plan; empty fields take per-experiment defaults during
/// resolution. The resolved plan (all defaults made explicit) is written
/// to manifest.json next to the outputs.
struct ExperimentPlan {
  ExperimentKind experiment = ExperimentKind::BasisPursuit;
  std::string custom_spec_path;
  std::vector<std::pair<int, int>> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<Algorithm> algorithms;
  std::optional<double> beta;
  std::optional<double> tau;
  std::optional<double> delta;
  std::optional<double> sigma;
  std::vector<double> tau2_sweep;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<DualStepMode> dual_step_mode;
  bool project_dual = true;
  bool full_scale = false;
  std::string output_dir = "out";
};

struct ResolvedPlan {
  ExperimentKind experiment = ExperimentKind::BasisPursuit;
  std::string custom_spec_path;
  std::vector<std::pair<int, int>> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<Algorithm> algorithms;
  double beta = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  std::vector<double> tau2_sweep;
  double tol = 0.0;
  int max_iter = 0;
  DualStepMode dual_step_mode = DualStepMode::ProofConsistent;
  bool project_dual = true;
  bool full_scale = false;
  std::string output_dir;
};

/// Fills defaults (the paper's tuned parameters) and checks the plan has
/// at least one algorithm and one (dims, seed) pair. Throws
/// InvalidPlanError on an unusable plan.
ResolvedPlan resolve_plan(const ExperimentPlan& plan, bool certify_mode = false);

struct RunOutcome {
  std::string algorithm;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double tau2 = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double time_s = 0.0;
  double cr = 0.0;
  double objective = 0.0;
  std::string trace_path;
};

struct ExperimentReport {
  ResolvedPlan plan;
  std::vector<RunOutcome> rows;
  bool any_divergence = false;
  bool certificates_ok = true;
  std::vector<std::string> notes;
  std::string table_csv_path;
  std::string table_txt_path;
  std::string manifest_path;
};

/// Solves every (dims, seed, algorithm) combination of the plan on
/// seeded basis-pursuit instances and writes the comparison table plus a
/// per-run trace CSV ("k,R,CR,objective,step_h_norm_sq"). Diverged runs
/// are marked and the remaining runs continue.
ExperimentReport run_basis_pursuit(const ExperimentPlan& plan);

/// tau2 parameter sweep on seeded LASSO instances: splitting PDP against
/// the linearized-ADMM baseline, with iteration/time ratio columns.
ExperimentReport run_lasso(const ExperimentPlan& plan);

/// Runs a certified configuration with the full iterate history, checks
/// the per-step contraction certificate and the ergodic gap bound
/// against a high-accuracy reference, and writes the certificate records
/// as JSON lines. Refuses uncertified configurations (PaperLiteral dual
/// steps, unprojected inequality multipliers, non-PDP algorithms).
ExperimentReport run_certify(const ExperimentPlan& plan);

/// Runs the plan's algorithms on a ProblemSpec loaded from JSON.
ExperimentReport run_custom(const ExperimentPlan& plan);

/// 0 success, 1 divergence in any run, 2 certificate failure.
/// (Invalid plans throw InvalidPlanError; the CLI maps that to 3.)
int exit_code(const ExperimentReport& report);

Algorithm parse_algorithm(const std::string& name);
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

/// Loads plan fields from a previously written manifest.json, so a run
/// can be reproduced exactly; flags set on the command line override.
ExperimentPlan plan_from_manifest(const std::string& path);

}  // namespace pdp

#endif  // PDP_EXPERIMENTS_HPP_
