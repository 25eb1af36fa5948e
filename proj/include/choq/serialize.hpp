#pragma once

#include "json.hpp"

#include "choq/diagnostics.hpp"
#include "choq/functional.hpp"
#include "choq/solver.hpp"

namespace choq {

nlohmann::json to_json(const EnergyBreakdown& eb);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const DiagnosticsReport& r);

}  // namespace choq
