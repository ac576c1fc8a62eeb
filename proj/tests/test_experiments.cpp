#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pdp/bench.hpp"
#include "pdp/experiments.hpp"
#include "pdp/problem_io.hpp"

using namespace pdp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// CSV text with the time_s column blanked, for determinism comparisons.
std::string csv_without_times(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string line, out;
  std::getline(is, line);
  std::stringstream header(line);
  std::vector<std::string> cols;
  std::string col;
  while (std::getline(header, col, ',')) cols.push_back(col);
  int time_idx = -1;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == "time_s") time_idx = static_cast<int>(i);
  out += line + "\n";
  while (std::getline(is, line)) {
    std::stringstream row(line);
    std::string cell, rebuilt;
    int i = 0;
    while (std::getline(row, cell, ',')) {
      if (i++ == time_idx) cell = "-";
      rebuilt += (rebuilt.empty() ? "" : ",") + cell;
    }
    out += rebuilt + "\n";
  }
  return out;
}

ExperimentPlan tiny_bp_plan(const std::string& out) {
  ExperimentPlan plan;
  plan.experiment = ExperimentKind::BasisPursuit;
  plan.dims = {{8, 16}};
  plan.seeds = {3, 4};
  plan.tol = 1e-5;
  plan.max_iter = 200000;
  plan.output_dir = out;
  return plan;
}

}  // namespace

TEST_CASE("plan resolution fills the paper defaults") {
  ExperimentPlan plan;
  plan.experiment = ExperimentKind::BasisPursuit;
  const ResolvedPlan rp = resolve_plan(plan);
  CHECK(rp.beta == 0.001);
  CHECK(rp.tau == 2.5);
  CHECK(rp.delta == 1000.0);
  CHECK(rp.tol == 1e-7);
  CHECK(rp.max_iter == 20000);
  CHECK(rp.dims == std::vector<std::pair<int, int>>{{300, 500}});
  CHECK(rp.algorithms ==
        std::vector<Algorithm>{Algorithm::PdpAlm, Algorithm::DpBalm, Algorithm::BalancedAlm});

  ExperimentPlan lasso;
  lasso.experiment = ExperimentKind::Lasso;
  const ResolvedPlan rl = resolve_plan(lasso);
  CHECK(rl.sigma == 0.1);
  CHECK(rl.tol == 1e-10);
  CHECK(rl.tau2_sweep.size() == 14);
  CHECK(rl.tau2_sweep.front() == doctest::Approx(0.05));
  CHECK(rl.tau2_sweep.back() == doctest::Approx(0.70));
  CHECK(rl.dims == std::vector<std::pair<int, int>>{{105, 350}});
  CHECK(rl.dual_step_mode == DualStepMode::PaperLiteral);

  lasso.full_scale = true;
  CHECK(resolve_plan(lasso).dims == std::vector<std::pair<int, int>>{{1050, 3500}});
}

TEST_CASE("plan validation failures") {
  ExperimentPlan plan;
  plan.experiment = ExperimentKind::Custom;  // no spec path
  CHECK_THROWS_AS(resolve_plan(plan), InvalidPlanError);

  ExperimentPlan bad_tol = tiny_bp_plan("unused");
  bad_tol.tol = -1.0;
  CHECK_THROWS_AS(resolve_plan(bad_tol), InvalidPlanError);

  ExperimentPlan bad_sweep;
  bad_sweep.experiment = ExperimentKind::Lasso;
  bad_sweep.tau2_sweep = {1.0};
  CHECK_THROWS_AS(resolve_plan(bad_sweep), InvalidPlanError);

  CHECK_THROWS_AS(parse_algorithm("gradient-descent"), InvalidPlanError);
  CHECK_THROWS_AS(parse_experiment("matrix-completion"), InvalidPlanError);
}

TEST_CASE("basis pursuit run: table, traces, and determinism") {
  const fs::path out1 = fresh_dir("pdp_exp_bp1");
  const fs::path out2 = fresh_dir("pdp_exp_bp2");

  const ExperimentReport rep1 = run_basis_pursuit(tiny_bp_plan(out1.string()));
  const ExperimentReport rep2 = run_basis_pursuit(tiny_bp_plan(out2.string()));

  CHECK(rep1.rows.size() == 2 * 3);  // 2 seeds x 3 default algorithms
  CHECK(exit_code(rep1) == 0);
  for (const auto& row : rep1.rows) {
    CHECK(row.converged);
    CHECK(fs::exists(row.trace_path));  // every table cell is backed by a trace
  }
  CHECK(fs::exists(rep1.manifest_path));
  CHECK(fs::exists(rep1.table_txt_path));

  // identical plan + seeds -> identical tables and traces, timing aside
  CHECK(csv_without_times(rep1.table_csv_path) == csv_without_times(rep2.table_csv_path));
  for (std::size_t i = 0; i < rep1.rows.size(); ++i) {
    std::ifstream a(rep1.rows[i].trace_path), b(rep2.rows[i].trace_path);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());  // trace CSVs carry no timing
  }
}

TEST_CASE("manifest round trip reproduces the plan") {
  const fs::path out = fresh_dir("pdp_exp_manifest");
  const ExperimentReport rep = run_basis_pursuit(tiny_bp_plan(out.string()));
  const ExperimentPlan again = plan_from_manifest(rep.manifest_path);
  CHECK(again.dims == std::vector<std::pair<int, int>>{{8, 16}});
  CHECK(again.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(again.tol.value() == 1e-5);
  CHECK(again.output_dir == out.string());

  const fs::path out3 = fresh_dir("pdp_exp_manifest2");
  ExperimentPlan rerun = again;
  rerun.output_dir = out3.string();
  const ExperimentReport rep2 = run_basis_pursuit(rerun);
  CHECK(csv_without_times(rep.table_csv_path) == csv_without_times(rep2.table_csv_path));
}

TEST_CASE("lasso run shape at a tiny scale") {
  ExperimentPlan plan;
  plan.experiment = ExperimentKind::Lasso;
  plan.dims = {{12, 30}};
  plan.seeds = {1};
  plan.tau2_sweep = {0.3, 0.5};
  plan.max_iter = 400;  // the recipe diverges; keep the runs short
  plan.output_dir = fresh_dir("pdp_exp_lasso").string();
  const ExperimentReport rep = run_lasso(plan);
  CHECK(rep.rows.size() == 2 * 2);  // sweep points x {pl-admm, split-pdp}
  for (const auto& row : rep.rows) {
    CHECK_FALSE(std::isnan(row.tau2));
    CHECK(fs::exists(row.trace_path));
  }
  CHECK(fs::exists(rep.table_txt_path));
}

TEST_CASE("certify: basis pursuit passes, uncertified configurations are refused") {
  ExperimentPlan plan;
  plan.experiment = ExperimentKind::BasisPursuit;
  plan.dims = {{10, 20}};
  plan.seeds = {1};
  plan.max_iter = 600;
  plan.output_dir = fresh_dir("pdp_exp_certify").string();

  const ExperimentReport rep = run_certify(plan);
  CHECK(rep.certificates_ok);
  CHECK(exit_code(rep) == 0);
  REQUIRE(rep.rows.size() == 1);
  CHECK(fs::exists(rep.rows[0].trace_path));  // the JSONL certificate record

  std::ifstream is(rep.rows[0].trace_path);
  std::string first_line;
  std::getline(is, first_line);
  const nlohmann::json rec = nlohmann::json::parse(first_line);
  CHECK(rec.at("k") == 1);
  CHECK(rec.at("pass").is_boolean());
  CHECK(rec.at("dist_prev").is_number());

  SUBCASE("paper-literal dual mode is refused") {
    ExperimentPlan bad = plan;
    bad.dual_step_mode = DualStepMode::PaperLiteral;
    CHECK_THROWS_AS(run_certify(bad), InvalidPlanError);
  }
  SUBCASE("non-PDP algorithms are refused") {
    ExperimentPlan bad = plan;
    bad.algorithms = {Algorithm::BalancedAlm};
    CHECK_THROWS_AS(run_certify(bad), InvalidPlanError);
  }
  SUBCASE("unprojected inequality mode is refused") {
    ExperimentPlan bad = plan;
    bad.project_dual = false;
    CHECK_THROWS_AS(run_certify(bad), InvalidPlanError);
  }
}

TEST_CASE("exit codes rank certificate failures above divergence") {
  ExperimentReport rep;
  CHECK(exit_code(rep) == 0);
  rep.any_divergence = true;
  CHECK(exit_code(rep) == 1);
  rep.certificates_ok = false;
  CHECK(exit_code(rep) == 2);
}

TEST_CASE("custom experiment runs a spec from disk") {
  const fs::path dir = fresh_dir("pdp_exp_custom");
  const BasisPursuitInstance inst = gen_basis_pursuit(6, 12, 2);
  const std::string spec_path = (dir / "spec.json").string();
  save_spec(spec_path, inst.spec, InstanceMeta{6, 12, 2, "bp-1"});

  ExperimentPlan plan;
  plan.experiment = ExperimentKind::Custom;
  plan.custom_spec_path = spec_path;
  plan.seeds = {9};
  plan.tol = 1e-5;
  plan.output_dir = (dir / "out").string();
  const ExperimentReport rep = run_custom(plan);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].algorithm == "pdp-alm");
  CHECK(rep.rows[0].converged);
  CHECK(exit_code(rep) == 0);
}
