// json_io.hpp
//
// Wire formats. Keys are emitted in a fixed order (ordered_json) so equal
// inputs always serialize byte-identically. Doubles are written with
// round-trip precision (17 significant digits); non-finite values become null.
#pragma once
#include <string>

#include <json.hpp>

#include "optistop/distributions.hpp"
#include "optistop/mc_oracle.hpp"
#include "optistop/noisy_selection.hpp"
#include "optistop/order_stats.hpp"
#include "optistop/planner.hpp"
#include "optistop/sequential_advisor.hpp"

namespace optistop {

using Json = nlohmann::ordered_json;

// {"family":"std_normal"} | {"family":"normal","mean":..,"spread":..} |
// {"family":"uniform","lo":..,"hi":..} | {"family":"pareto","alpha":..}
Json to_json(const DistributionSpec& spec);
// Also accepts the preset strings "std_normal", "uniform01" and "uniform_pm1".
DistributionSpec distribution_from_json(const Json& j);
// Parses `text` as a preset name or a JSON object.
DistributionSpec parse_distribution(const std::string& text);

// {"mu":..,"a":..,"b":..}; a and b are standard deviations.
Json to_json(const NoisyModel& model);
NoisyModel noisy_model_from_json(const Json& j);

// {"c":..}
Json to_json(const CostModel& cost);
CostModel cost_model_from_json(const Json& j);

Json to_json(const PlanResult& plan);
Json to_json(const Advice& advice);
Json to_json(const McEstimate& est);
// {"spec":{...}, "max_n":.., "tolerance":.., "rows":[{"n":..,"K_n":..,"k_n":..}]}
Json to_json(const RankitTable& table);

// Reads a finite number field, throwing ValidationError(field) when it is
// missing or not numeric.
double require_number(const Json& j, const char* field);
double optional_number(const Json& j, const char* field, double fallback);

}  // namespace optistop
