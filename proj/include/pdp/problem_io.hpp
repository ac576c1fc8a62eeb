#ifndef PDP_PROBLEM_IO_HPP_
#define PDP_PROBLEM_IO_HPP_

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pdp/types.hpp"

namespace pdp {

/// Generator provenance attached to dumped instances.
struct InstanceMeta {
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string generator_version;
};

/// JSON schema:
/// {
///   "sense": "eq" | "ge",
///   "b": [...],
///   "blocks": [{
///     "A": [[...], ...],
///     "beta": r,
///     "q_mode": {"variant": "identity_minus_gram" | "beta_scaled_identity_minus_gram"
///                           | "general_spd", "tau": r, "Q": [[...]]},
///     "objective": {"kind": "l1" | "scaled_l1" | "half_sq_dist" | "zero",
///                   "params": {...}}
///   }, ...],
///   "p1": int,
///   "meta": {...}   // optional
/// }
nlohmann::json spec_to_json(const ProblemSpec& spec,
                            const std::optional<InstanceMeta>& meta = std::nullopt);
ProblemSpec spec_from_json(const nlohmann::json& j);
std::optional<InstanceMeta> meta_from_json(const nlohmann::json& j);

void save_spec(const std::string& path, const ProblemSpec& spec,
               const std::optional<InstanceMeta>& meta = std::nullopt);
ProblemSpec load_spec(const std::string& path);

}  // namespace pdp

#endif  // PDP_PROBLEM_IO_HPP_
