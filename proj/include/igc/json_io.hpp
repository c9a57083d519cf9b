#pragma once

#include <string>

#include <json.hpp>

#include "igc/channels.hpp"
#include "igc/deficiency.hpp"
#include "igc/harness.hpp"
#include "igc/measures.hpp"
#include "igc/tangent_sim.hpp"

namespace igc {

using json = nlohmann::json;

// Schemas: pmf {"k", "probs"}, tangent {"k", "weights"}; a local data object
// carries both arrays; channels use {"in", "out", "cols", "tcols"} and
// experiments {"thetas", "support", "laws"}.
LocalData local_data_from_json(const json& j);
json local_data_to_json(const LocalData& a);

ChannelLocal channel_from_json(const json& j);
json channel_to_json(const ChannelLocal& cl);

FiniteExperiment experiment_from_json(const json& j);

json plan_to_json(const SimulationPlan& plan);
json error_report_to_json(const ErrorReport& r);
json sweep_to_json(const SweepResult& s);

// Request dispatcher shared by the shared-library entry point and the CLI.
// Returns the response JSON; *code is 0 on success, 1 on input validation
// failure, 2 on numerical failure.
std::string run_request(const std::string& request_json, int* code);

}  // namespace igc
