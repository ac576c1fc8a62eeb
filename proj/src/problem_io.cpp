#include "pdp/problem_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "pdp/prox.hpp"

namespace pdp {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be a 2-d array");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("matrix JSON rows have mixed widths");
    for (std::size_t k = 0; k < cols; ++k) a(i, k) = j.at(i).at(k).get<double>();
  }
  return a;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

json objective_to_json(const ProxOracle& oracle) {
  json out;
  out["kind"] = oracle.kind();
  json params = json::object();
  if (const auto* scaled = dynamic_cast<const ScaledL1Norm*>(&oracle))
    params["sigma"] = scaled->sigma();
  else if (const auto* half = dynamic_cast<const HalfSquaredDistance*>(&oracle))
    params["b"] = vector_to_json(half->target());
  out["params"] = std::move(params);
  return out;
}

std::shared_ptr<const ProxOracle> objective_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "l1") return std::make_shared<L1Norm>();
  if (kind == "scaled_l1") return std::make_shared<ScaledL1Norm>(params.at("sigma").get<double>());
  if (kind == "half_sq_dist")
    return std::make_shared<HalfSquaredDistance>(vector_from_json(params.at("b")));
  if (kind == "zero") return std::make_shared<ZeroObjective>();
  throw std::invalid_argument("unknown objective kind '" + kind + "'");
}

json q_mode_to_json(const QMode& mode) {
  json out;
  if (const auto* img = std::get_if<IdentityMinusGram>(&mode)) {
    out["variant"] = "identity_minus_gram";
    out["tau"] = img->tau;
  } else if (const auto* bsg = std::get_if<BetaScaledIdentityMinusGram>(&mode)) {
    out["variant"] = "beta_scaled_identity_minus_gram";
    out["tau"] = bsg->tau;
  } else {
    out["variant"] = "general_spd";
    out["Q"] = matrix_to_json(std::get<GeneralSpd>(mode).q);
  }
  return out;
}

QMode q_mode_from_json(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "identity_minus_gram") return IdentityMinusGram{j.at("tau").get<double>()};
  if (variant == "beta_scaled_identity_minus_gram")
    return BetaScaledIdentityMinusGram{j.at("tau").get<double>()};
  if (variant == "general_spd") return GeneralSpd{matrix_from_json(j.at("Q"))};
  throw std::invalid_argument("unknown q_mode variant '" + variant + "'");
}

}  // namespace

json spec_to_json(const ProblemSpec& spec, const std::optional<InstanceMeta>& meta) {
  json out;
  out["sense"] = spec.sense == ConstraintSense::Equality ? "eq" : "ge";
  out["b"] = vector_to_json(spec.rhs);
  out["p1"] = spec.proximal_count;
  json blocks = json::array();
  for (const auto& blk : spec.blocks) {
    json b;
    b["A"] = matrix_to_json(blk.matrix);
    b["beta"] = blk.beta;
    b["q_mode"] = q_mode_to_json(blk.prox_mode);
    b["objective"] = objective_to_json(*blk.objective);
    blocks.push_back(std::move(b));
  }
  out["blocks"] = std::move(blocks);
  if (meta) {
    out["meta"] = {{"m", meta->m},
                   {"n", meta->n},
                   {"seed", meta->seed},
                   {"generator_version", meta->generator_version}};
  }
  return out;
}

ProblemSpec spec_from_json(const json& j) {
  ProblemSpec spec;
  const std::string sense = j.at("sense").get<std::string>();
  if (sense == "eq")
    spec.sense = ConstraintSense::Equality;
  else if (sense == "ge")
    spec.sense = ConstraintSense::InequalityGE;
  else
    throw std::invalid_argument("unknown sense '" + sense + "'");
  spec.rhs = vector_from_json(j.at("b"));
  for (const auto& bj : j.at("blocks")) {
    BlockSpec blk;
    blk.matrix = matrix_from_json(bj.at("A"));
    blk.beta = bj.at("beta").get<double>();
    blk.prox_mode = q_mode_from_json(bj.at("q_mode"));
    blk.objective = objective_from_json(bj.at("objective"));
    spec.blocks.push_back(std::move(blk));
  }
  spec.proximal_count = j.value("p1", spec.block_count());
  return spec;
}

std::optional<InstanceMeta> meta_from_json(const json& j) {
  if (!j.contains("meta")) return std::nullopt;
  const json& m = j.at("meta");
  InstanceMeta meta;
  meta.m = m.at("m").get<int>();
  meta.n = m.at("n").get<int>();
  meta.seed = m.at("seed").get<std::uint64_t>();
  meta.generator_version = m.value("generator_version", "");
  return meta;
}

void save_spec(const std::string& path, const ProblemSpec& spec,
               const std::optional<InstanceMeta>& meta) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << spec_to_json(spec, meta).dump(2) << "\n";
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  is >> j;
  return spec_from_json(j);
}

}  // namespace pdp
