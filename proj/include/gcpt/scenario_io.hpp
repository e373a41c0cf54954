#pragma once

#include <string>

#include <json.hpp>

#include "gcpt/population.hpp"
#include "gcpt/valuation.hpp"

namespace gcpt {

/// Keys of an agent specification, in the order of agent_from_spec_vector.
inline constexpr const char* kAgentKeys[10] = {"p0_minus", "gamma_minus", "p0_plus", "gamma_plus",
                                               "m_minus",  "V_minus",     "a_minus", "m_plus",
                                               "V_plus",   "a_plus"};

/// Parses an agent object. Throws InvalidParameter naming the first violated
/// constraint (missing key, non-numeric value or a domain rule).
CptAgent parse_agent(const nlohmann::json& j);

nlohmann::json agent_to_json(const CptAgent& agent);

/// Parses a scenario document:
///
///   population     {"individuals": [[...], ...]}
///                  or {"sampler": {"name": "gaussian", "mean": [...], "stddev": [...]}
///                                 | {"name": "point", "at": [...]},
///                      "samples": n, "seed": s}
///   parameter_map  {"name": "affine", "alpha0", "A", "beta0", "B", "agent"?}
///   gain           {"name": "adoption" | "quadratic_cost" (c) | "revenue" (price_index)}
///   social         {"name": "none" | "linear" (kappa) | "power" (kappa, beta)}
///   program        {"lower": [...], "upper": [...], "value"?: [...]}
///
/// `gain` and `social` are optional. Sampler scenarios are materialized with
/// their own samples/seed. Throws ScenarioError whose path is a JSON pointer
/// to the offending entry.
PopulationScenario parse_scenario(const nlohmann::json& doc);

PopulationScenario load_scenario_file(const std::string& path);

}  // namespace gcpt
