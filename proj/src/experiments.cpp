#include "pdp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pdp/bench.hpp"
#include "pdp/diagnostics.hpp"
#include "pdp/problem_io.hpp"
#include "pdp/prox.hpp"
#include "pdp/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pdp {

namespace {

constexpr std::uint64_t kInitSeedSalt = 0xA5A5A5A5ull;

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_short(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << "k,R,CR,objective,step_h_norm_sq\n";
  for (const auto& rec : trace) {
    os << rec.iter << ',' << format_double(rec.residual_R) << ',' << format_double(rec.cr) << ','
       << format_double(rec.objective) << ',' << format_double(rec.step_h_norm_sq) << '\n';
  }
}

/// Harness-level divergence flag: the solver aborted, or the run ended
/// with the residual 10x above its running minimum and no lower than it
/// started. Transient swells of a decaying residual do not count; slow
/// oscillatory runs end as plain non-converged rows.
bool flag_divergence(const SolveResult& res) {
  if (res.status == SolveStatus::Diverged) return true;
  if (res.converged || res.trace.empty()) return false;
  double min_r = res.trace.front().residual_R;
  for (const auto& rec : res.trace) min_r = std::min(min_r, rec.residual_R);
  const double last = res.trace.back().residual_R;
  return last > 10.0 * min_r && last >= res.trace.front().residual_R;
}

RunOutcome make_outcome(const std::string& alg, int m, int n, std::uint64_t seed,
                        const SolveResult& res, const std::string& trace_path) {
  RunOutcome row;
  row.algorithm = alg;
  row.m = m;
  row.n = n;
  row.seed = seed;
  row.converged = res.converged;
  row.diverged = flag_divergence(res);
  row.iterations = res.iterations;
  if (!res.trace.empty()) {
    row.time_s = res.trace.back().wall_time;
    row.cr = res.trace.back().cr;
    row.objective = res.trace.back().objective;
  }
  row.trace_path = trace_path;
  return row;
}

json plan_to_json(const ResolvedPlan& plan) {
  json dims = json::array();
  for (const auto& [m, n] : plan.dims) dims.push_back({m, n});
  json algs = json::array();
  for (Algorithm a : plan.algorithms) algs.push_back(to_string(a));
  json sweep = json::array();
  for (double t : plan.tau2_sweep) sweep.push_back(t);
  return json{{"experiment", to_string(plan.experiment)},
              {"custom_spec_path", plan.custom_spec_path},
              {"dims", dims},
              {"seeds", plan.seeds},
              {"algorithms", algs},
              {"beta", plan.beta},
              {"tau", plan.tau},
              {"delta", plan.delta},
              {"sigma", plan.sigma},
              {"tau2_sweep", sweep},
              {"tol", plan.tol},
              {"max_iter", plan.max_iter},
              {"dual_step_mode", to_string(plan.dual_step_mode)},
              {"project_dual", plan.project_dual},
              {"full_scale", plan.full_scale},
              {"output_dir", plan.output_dir}};
}

std::string write_manifest(const ResolvedPlan& plan) {
  fs::create_directories(plan.output_dir);
  const std::string path = (fs::path(plan.output_dir) / "manifest.json").string();
  std::ofstream os(path);
  os << plan_to_json(plan).dump(2) << "\n";
  return path;
}

std::string trace_dir(const ResolvedPlan& plan) {
  const std::string dir = (fs::path(plan.output_dir) / "traces").string();
  fs::create_directories(dir);
  return dir;
}

void check_spec_usable(const ProblemSpec& spec, ExperimentReport& report, const std::string& what,
                       bool uses_prox_mode = true) {
  const auto violations = validate(spec);
  if (violations.empty()) return;
  if (!only_prox_mode_violations(violations)) {
    std::string msg = what + ": spec fails validation:";
    for (const auto& v : violations) msg += "\n  [" + to_string(v.kind) + "] " + v.message;
    throw InvalidPlanError(msg);
  }
  if (!uses_prox_mode) return;  // the balanced variants never touch Q
  for (const auto& v : violations)
    report.notes.push_back(what + ": proceeding despite " + v.message);
}

SolverConfig base_config(const ResolvedPlan& plan, Algorithm alg) {
  SolverConfig cfg;
  cfg.algorithm = alg;
  cfg.delta = plan.delta;
  cfg.dual_step_mode = plan.dual_step_mode;
  cfg.tol = plan.tol;
  cfg.max_iter = plan.max_iter;
  cfg.project_dual = plan.project_dual;
  return cfg;
}

void write_table_csv(const std::string& path, const std::vector<RunOutcome>& rows,
                     bool with_tau2) {
  std::ofstream os(path);
  os << "m,n,seed," << (with_tau2 ? "tau2," : "")
     << "algorithm,iterations,time_s,cr,objective,status\n";
  for (const auto& row : rows) {
    os << row.m << ',' << row.n << ',' << row.seed << ',';
    if (with_tau2) os << format_double(row.tau2) << ',';
    os << row.algorithm << ',' << row.iterations << ',' << format_double(row.time_s) << ','
       << format_double(row.cr) << ',' << format_double(row.objective) << ','
       << (row.diverged ? "DIVERGED" : (row.converged ? "converged" : "max-iter")) << '\n';
  }
}

const RunOutcome* find_row(const std::vector<RunOutcome>& rows, int m, int n,
                           std::uint64_t seed, double tau2, const std::string& alg) {
  for (const auto& row : rows) {
    const bool tau2_match =
        (std::isnan(tau2) && std::isnan(row.tau2)) || row.tau2 == tau2;
    if (row.m == m && row.n == n && row.seed == seed && tau2_match && row.algorithm == alg)
      return &row;
  }
  return nullptr;
}

void write_bp_text_table(const std::string& path, const ResolvedPlan& plan,
                         const std::vector<RunOutcome>& rows) {
  std::ofstream os(path);
  os << std::left << std::setw(14) << "m x n" << std::setw(6) << "seed";
  for (Algorithm a : plan.algorithms)
    os << "| " << std::setw(8) << ("Iter." ) << std::setw(10) << "Time" << std::setw(12) << "CR"
       << " (" << to_string(a) << ")  ";
  os << "\n";
  for (const auto& [m, n] : plan.dims) {
    for (std::uint64_t seed : plan.seeds) {
      std::ostringstream dim;
      dim << m << "x" << n;
      os << std::left << std::setw(14) << dim.str() << std::setw(6) << seed;
      for (Algorithm a : plan.algorithms) {
        const RunOutcome* row = find_row(rows, m, n, seed,
                                         std::numeric_limits<double>::quiet_NaN(),
                                         to_string(a));
        if (!row) continue;
        os << "| ";
        if (row->diverged) {
          os << std::setw(30) << "DIVERGED" << "     ";
        } else {
          std::ostringstream t;
          t << std::fixed << std::setprecision(2) << row->time_s;
          os << std::setw(8) << row->iterations << std::setw(10) << t.str() << std::setw(12)
             << format_short(row->cr) << "     ";
        }
      }
      os << "\n";
    }
  }
}

void write_lasso_text_table(const std::string& path, const ResolvedPlan& plan,
                            const std::vector<RunOutcome>& rows) {
  std::ofstream os(path);
  os << std::left << std::setw(8) << "tau2" << std::setw(9) << "Iter.1" << std::setw(10)
     << "Time.1" << std::setw(9) << "Iter.3" << std::setw(10) << "Time.3" << std::setw(12)
     << "It3/It1" << std::setw(12) << "T3/T1" << "   (1 = pl-admm, 3 = split-pdp)\n";
  for (const auto& [m, n] : plan.dims) {
    for (std::uint64_t seed : plan.seeds) {
      for (double tau2 : plan.tau2_sweep) {
        const RunOutcome* admm = find_row(rows, m, n, seed, tau2, "pl-admm");
        const RunOutcome* pdp = find_row(rows, m, n, seed, tau2, "split-pdp");
        if (!admm || !pdp) continue;
        std::ostringstream t2;
        t2 << std::fixed << std::setprecision(2) << tau2;
        os << std::left << std::setw(8) << t2.str();
        auto cell = [&os](const RunOutcome* r) {
          if (r->diverged) {
            os << std::setw(9) << "DIV" << std::setw(10) << "-";
          } else {
            std::ostringstream t;
            t << std::fixed << std::setprecision(2) << r->time_s;
            os << std::setw(9) << r->iterations << std::setw(10) << t.str();
          }
        };
        cell(admm);
        cell(pdp);
        if (!admm->diverged && !pdp->diverged && admm->iterations > 0 && admm->time_s > 0.0) {
          std::ostringstream r1, r2;
          r1 << std::fixed << std::setprecision(2)
             << static_cast<double>(pdp->iterations) / admm->iterations;
          r2 << std::fixed << std::setprecision(2) << pdp->time_s / admm->time_s;
          os << std::setw(12) << r1.str() << std::setw(12) << r2.str();
        } else {
          os << std::setw(12) << "-" << std::setw(12) << "-";
        }
        os << "\n";
      }
    }
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BasisPursuit: return "basis-pursuit";
    case ExperimentKind::Lasso: return "lasso";
    case ExperimentKind::Custom: return "custom";
  }
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "basis-pursuit" || name == "bp") return ExperimentKind::BasisPursuit;
  if (name == "lasso") return ExperimentKind::Lasso;
  if (name == "custom") return ExperimentKind::Custom;
  throw InvalidPlanError("unknown experiment '" + name + "'");
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::PdpAlm, Algorithm::BalancedAlm, Algorithm::DpBalm,
                      Algorithm::PenaltyAlm, Algorithm::SplittingPdp, Algorithm::PartialProxPdp,
                      Algorithm::LinearizedAdmm})
    if (to_string(a) == name) return a;
  throw InvalidPlanError("unknown algorithm '" + name + "'");
}

ResolvedPlan resolve_plan(const ExperimentPlan& plan, bool certify_mode) {
  ResolvedPlan out;
  out.experiment = plan.experiment;
  out.custom_spec_path = plan.custom_spec_path;
  out.project_dual = plan.project_dual;
  out.full_scale = plan.full_scale;
  out.output_dir = plan.output_dir;
  out.beta = plan.beta.value_or(0.001);
  out.tau = plan.tau.value_or(2.5);
  out.delta = plan.delta.value_or(1000.0);
  out.sigma = plan.sigma.value_or(0.1);
  out.seeds = plan.seeds.empty() ? std::vector<std::uint64_t>{1} : plan.seeds;
  out.dims = plan.dims;
  out.algorithms = plan.algorithms;
  out.tau2_sweep = plan.tau2_sweep;

  switch (plan.experiment) {
    case ExperimentKind::BasisPursuit:
      if (out.dims.empty()) out.dims = {{300, 500}};
      if (out.algorithms.empty() && !certify_mode)
        out.algorithms = {Algorithm::PdpAlm, Algorithm::DpBalm, Algorithm::BalancedAlm};
      out.tol = plan.tol.value_or(1e-7);
      out.max_iter = plan.max_iter.value_or(20000);
      out.dual_step_mode = plan.dual_step_mode.value_or(DualStepMode::ProofConsistent);
      break;
    case ExperimentKind::Lasso:
      if (out.dims.empty()) out.dims = {plan.full_scale ? std::pair{1050, 3500}
                                                        : std::pair{105, 350}};
      if (out.algorithms.empty() && !certify_mode)
        out.algorithms = {Algorithm::LinearizedAdmm, Algorithm::SplittingPdp};
      if (out.tau2_sweep.empty())
        for (int i = 1; i <= 14; ++i) out.tau2_sweep.push_back(0.05 * i);
      out.tol = plan.tol.value_or(1e-10);
      out.max_iter = plan.max_iter.value_or(200000);
      out.dual_step_mode = plan.dual_step_mode.value_or(DualStepMode::PaperLiteral);
      break;
    case ExperimentKind::Custom:
      if (plan.custom_spec_path.empty())
        throw InvalidPlanError("custom experiment needs a spec path");
      out.dims = {{0, 0}};  // sizes come from the loaded spec
      out.tol = plan.tol.value_or(1e-7);
      out.max_iter = plan.max_iter.value_or(20000);
      out.dual_step_mode = plan.dual_step_mode.value_or(DualStepMode::ProofConsistent);
      break;
  }
  if (certify_mode) {
    if (out.algorithms.empty()) out.algorithms = {Algorithm::PdpAlm};
    out.tol = plan.tol.value_or(1e-9);
    out.max_iter = plan.max_iter.value_or(5000);
  }

  // run_custom picks a default once it knows the loaded spec's block count
  if (out.algorithms.empty() && out.experiment != ExperimentKind::Custom)
    throw InvalidPlanError("plan has no algorithms");
  if (out.dims.empty() || out.seeds.empty())
    throw InvalidPlanError("plan needs at least one (dims, seed) pair");
  if (!(out.tol > 0.0)) throw InvalidPlanError("tol must be positive");
  if (out.max_iter < 1) throw InvalidPlanError("max_iter must be at least 1");
  for (double t : out.tau2_sweep)
    if (!(t > 0.0) || t >= 2.0 || t == 1.0)
      throw InvalidPlanError("tau2 sweep value " + std::to_string(t) + " outside (0,1) u (1,2)");
  return out;
}

ExperimentReport run_basis_pursuit(const ExperimentPlan& plan) {
  ExperimentReport report;
  report.plan = resolve_plan(plan, false);
  const ResolvedPlan& rp = report.plan;
  if (rp.experiment != ExperimentKind::BasisPursuit)
    throw InvalidPlanError("run_basis_pursuit: plan is for another experiment");
  report.manifest_path = write_manifest(rp);
  const std::string traces = trace_dir(rp);

  for (const auto& [m, n] : rp.dims) {
    for (std::uint64_t seed : rp.seeds) {
      const BasisPursuitInstance inst = gen_basis_pursuit(m, n, seed);
      for (Algorithm alg : rp.algorithms) {
        // The balanced variants use tau as their penalty; the PDP family
        // uses (beta, tau) for the Gram-cancelling proximal mode.
        const bool balanced = alg == Algorithm::BalancedAlm || alg == Algorithm::DpBalm;
        ProblemSpec spec = make_basis_pursuit_spec(inst.a, inst.b,
                                                   balanced ? rp.tau : rp.beta, rp.tau);
        std::ostringstream what;
        what << "bp " << m << "x" << n << " seed " << seed << " " << to_string(alg);
        check_spec_usable(spec, report, what.str(), !balanced);

        SolverConfig cfg = base_config(rp, alg);
        const Iterate init = random_start(spec, seed ^ kInitSeedSalt);
        const SolveResult res = solve(spec, cfg, init);

        std::ostringstream name;
        name << "bp_" << m << "x" << n << "_s" << seed << "_" << to_string(alg) << ".csv";
        const std::string path = (fs::path(traces) / name.str()).string();
        write_trace_csv(path, res.trace);
        report.rows.push_back(make_outcome(to_string(alg), m, n, seed, res, path));
        report.any_divergence = report.any_divergence || report.rows.back().diverged;
      }
    }
  }

  report.table_csv_path = (fs::path(rp.output_dir) / "basis_pursuit_table.csv").string();
  report.table_txt_path = (fs::path(rp.output_dir) / "basis_pursuit_table.txt").string();
  write_table_csv(report.table_csv_path, report.rows, false);
  write_bp_text_table(report.table_txt_path, rp, report.rows);
  return report;
}

ExperimentReport run_lasso(const ExperimentPlan& plan) {
  ExperimentReport report;
  report.plan = resolve_plan(plan, false);
  const ResolvedPlan& rp = report.plan;
  if (rp.experiment != ExperimentKind::Lasso)
    throw InvalidPlanError("run_lasso: plan is for another experiment");
  report.manifest_path = write_manifest(rp);
  const std::string traces = trace_dir(rp);

  for (const auto& [m, n] : rp.dims) {
    for (std::uint64_t seed : rp.seeds) {
      const LassoInstance inst = gen_lasso(m, n, seed);
      const double gram_norm = spectral_norm_gram(inst.a);
      for (double tau2 : rp.tau2_sweep) {
        const LassoParams params = lasso_params(tau2);
        ProblemSpec spec = make_lasso_spec(inst.a, inst.b, rp.sigma, params.beta1, params.beta2,
                                           params.tau1, tau2);
        const Iterate init = random_start(spec, seed ^ kInitSeedSalt);
        for (Algorithm alg : rp.algorithms) {
          SolverConfig cfg = base_config(rp, alg);
          if (alg == Algorithm::LinearizedAdmm) {
            // Recipe beta; the linearization weight is raised to its
            // convergence bound when the recipe value sits below it.
            AdmmParams ap;
            ap.beta = params.beta1;
            ap.tau = std::max(params.tau1, kTauSafety * ap.beta * gram_norm);
            cfg.admm = ap;
          } else {
            std::ostringstream what;
            what << "lasso " << m << "x" << n << " seed " << seed << " tau2 " << tau2;
            check_spec_usable(spec, report, what.str());
          }
          const SolveResult res = solve(spec, cfg, init);

          std::ostringstream name;
          name << "lasso_" << m << "x" << n << "_s" << seed << "_tau2_"
               << std::fixed << std::setprecision(2) << tau2 << "_" << to_string(alg) << ".csv";
          const std::string path = (fs::path(traces) / name.str()).string();
          write_trace_csv(path, res.trace);
          RunOutcome row = make_outcome(to_string(alg), m, n, seed, res, path);
          row.tau2 = tau2;
          report.rows.push_back(row);
          report.any_divergence = report.any_divergence || row.diverged;
        }
      }
    }
  }

  report.table_csv_path = (fs::path(rp.output_dir) / "lasso_table.csv").string();
  report.table_txt_path = (fs::path(rp.output_dir) / "lasso_table.txt").string();
  write_table_csv(report.table_csv_path, report.rows, true);
  write_lasso_text_table(report.table_txt_path, rp, report.rows);
  return report;
}

ExperimentReport run_certify(const ExperimentPlan& plan) {
  ExperimentReport report;
  report.plan = resolve_plan(plan, true);
  const ResolvedPlan& rp = report.plan;

  for (Algorithm alg : rp.algorithms) {
    const bool certified = alg == Algorithm::PdpAlm || alg == Algorithm::SplittingPdp ||
                           alg == Algorithm::PartialProxPdp;
    if (!certified)
      throw InvalidPlanError("certify: " + to_string(alg) +
                             " has no contraction certificate; use the PDP family");
  }
  if (rp.dual_step_mode == DualStepMode::PaperLiteral)
    throw InvalidPlanError(
        "certify: the paper-literal dual step is not covered by the convergence "
        "certificate; use proof-consistent");
  if (!rp.project_dual)
    throw InvalidPlanError(
        "certify: the unprojected inequality multiplier update is not covered by the "
        "certificate");
  if (rp.experiment == ExperimentKind::Lasso)
    throw InvalidPlanError(
        "certify: the LASSO recipe violates the proximal positive-definiteness bounds; "
        "certify a basis-pursuit or custom plan with valid parameters");

  report.manifest_path = write_manifest(rp);
  const std::string cert_dir = (fs::path(rp.output_dir) / "certify").string();
  fs::create_directories(cert_dir);

  for (const auto& [m, n] : rp.dims) {
    for (std::uint64_t seed : rp.seeds) {
      ProblemSpec spec;
      if (rp.experiment == ExperimentKind::Custom) {
        spec = load_spec(rp.custom_spec_path);
      } else {
        const BasisPursuitInstance inst = gen_basis_pursuit(m, n, seed);
        spec = make_basis_pursuit_spec(inst.a, inst.b, rp.beta, rp.tau);
      }
      const auto violations = validate(spec);
      if (!violations.empty()) {
        std::string msg = "certify: spec must validate cleanly:";
        for (const auto& v : violations) msg += "\n  " + v.message;
        throw InvalidPlanError(msg);
      }

      for (Algorithm alg : rp.algorithms) {
        SolverConfig cfg = base_config(rp, alg);
        cfg.record_iterates = true;
        const SolveResult res = solve(spec, cfg, random_start(spec, seed ^ kInitSeedSalt));

        const ReferenceSolution ref = reference_solution(spec, seed ^ 0x5EEDull);
        HVariant variant = alg == Algorithm::PdpAlm ? HVariant::SingleBlock
                           : alg == Algorithm::SplittingPdp ? HVariant::Splitting
                                                            : HVariant::PartialProx;
        const HMetric metric(spec, variant);

        std::vector<StepCertificate> certs;
        certs.reserve(res.iterates.size());
        bool all_pass = true;
        for (std::size_t k = 0; k + 1 < res.iterates.size(); ++k) {
          certs.push_back(
              check_step_certificate(metric, res.iterates[k], res.iterates[k + 1], ref.point));
          all_pass = all_pass && certs.back().pass;
        }

        std::vector<Iterate> tail(res.iterates.begin() + 1, res.iterates.end());
        std::vector<double> theta;
        theta.reserve(res.trace.size());
        for (const auto& rec : res.trace) theta.push_back(rec.objective);
        const ErgodicGapReport ergodic =
            ergodic_gap_check(metric, res.iterates.front(), tail, ref.point, theta);

        std::ostringstream name;
        name << to_string(rp.experiment) << "_" << m << "x" << n << "_s" << seed << "_"
             << to_string(alg) << ".jsonl";
        const std::string path = (fs::path(cert_dir) / name.str()).string();
        std::ofstream os(path);
        write_certificates_jsonl(os, certs);

        RunOutcome row = make_outcome(to_string(alg), m, n, seed, res, path);
        report.rows.push_back(row);
        report.any_divergence = report.any_divergence || row.diverged;
        if (!all_pass || !ergodic.pass) {
          report.certificates_ok = false;
          std::ostringstream note;
          note << "certificate failure at " << m << "x" << n << " seed " << seed << " "
               << to_string(alg);
          if (!ergodic.pass) note << " (ergodic bound violated at t = " << ergodic.first_violation
                                  << ")";
          report.notes.push_back(note.str());
        }
      }
    }
  }
  return report;
}

ExperimentReport run_custom(const ExperimentPlan& plan) {
  ExperimentReport report;
  report.plan = resolve_plan(plan, false);
  ResolvedPlan& rp = report.plan;
  if (rp.experiment != ExperimentKind::Custom)
    throw InvalidPlanError("run_custom: plan is for another experiment");

  ProblemSpec spec = load_spec(rp.custom_spec_path);
  if (rp.algorithms.empty())
    rp.algorithms = {spec.block_count() == 1 ? Algorithm::PdpAlm : Algorithm::SplittingPdp};
  check_spec_usable(spec, report, "custom spec");
  report.manifest_path = write_manifest(rp);
  const std::string traces = trace_dir(rp);

  const int m = static_cast<int>(spec.rows());
  const int n = static_cast<int>(spec.cols());
  for (std::uint64_t seed : rp.seeds) {
    const Iterate init = random_start(spec, seed ^ kInitSeedSalt);
    for (Algorithm alg : rp.algorithms) {
      SolverConfig cfg = base_config(rp, alg);
      if (alg == Algorithm::LinearizedAdmm) {
        AdmmParams ap;
        ap.beta = plan.beta.value_or(spec.blocks[0].beta);
        const double bound =
            kTauSafety * ap.beta * spectral_norm_gram(spec.blocks.back().matrix);
        ap.tau = std::max(plan.tau.value_or(0.0), bound);
        cfg.admm = ap;
      }
      const SolveResult res = solve(spec, cfg, init);
      std::ostringstream name;
      name << "custom_s" << seed << "_" << to_string(alg) << ".csv";
      const std::string path = (fs::path(traces) / name.str()).string();
      write_trace_csv(path, res.trace);
      report.rows.push_back(make_outcome(to_string(alg), m, n, seed, res, path));
      report.any_divergence = report.any_divergence || report.rows.back().diverged;
    }
  }

  report.table_csv_path = (fs::path(rp.output_dir) / "custom_table.csv").string();
  write_table_csv(report.table_csv_path, report.rows, false);
  return report;
}

int exit_code(const ExperimentReport& report) {
  if (!report.certificates_ok) return 2;
  if (report.any_divergence) return 1;
  return 0;
}

ExperimentPlan plan_from_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidPlanError("cannot open manifest '" + path + "'");
  json j;
  is >> j;
  ExperimentPlan plan;
  plan.experiment = parse_experiment(j.at("experiment").get<std::string>());
  plan.custom_spec_path = j.value("custom_spec_path", "");
  for (const auto& d : j.at("dims"))
    plan.dims.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
  plan.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  for (const auto& a : j.at("algorithms"))
    plan.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  plan.beta = j.at("beta").get<double>();
  plan.tau = j.at("tau").get<double>();
  plan.delta = j.at("delta").get<double>();
  plan.sigma = j.at("sigma").get<double>();
  plan.tau2_sweep = j.at("tau2_sweep").get<std::vector<double>>();
  plan.tol = j.at("tol").get<double>();
  plan.max_iter = j.at("max_iter").get<int>();
  plan.dual_step_mode = j.at("dual_step_mode").get<std::string>() == "paper-literal"
                            ? DualStepMode::PaperLiteral
                            : DualStepMode::ProofConsistent;
  plan.project_dual = j.at("project_dual").get<bool>();
  plan.full_scale = j.at("full_scale").get<bool>();
  plan.output_dir = j.at("output_dir").get<std::string>();
  return plan;
}

}  // namespace pdp
