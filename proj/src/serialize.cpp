#include "choq/serialize.hpp"

namespace choq {

using nlohmann::json;

json to_json(const EnergyBreakdown& eb) {
  return json{{"h1_norm_sq", eb.h1_norm_sq},
              {"interaction", eb.interaction},
              {"action", eb.action},
              {"nehari_residual", eb.nehari_residual},
              {"nodal_residual_plus", eb.nodal_residual_plus},
              {"nodal_residual_minus", eb.nodal_residual_minus}};
}

json to_json(const SolveReport& r) {
  return json{{"level", r.level},
              {"energy", to_json(r.energy)},
              {"residual", r.residual},
              {"pohozaev_residual", r.pohozaev_residual},
              {"iterations", r.iterations},
              {"p", r.p},
              {"alpha", r.alpha},
              {"field_path", r.field_path},
              {"converged", r.converged},
              {"status", r.status}};
}

json to_json(const DiagnosticsReport& r) {
  return json{{"pohozaev_residual", r.pohozaev_residual},
              {"hls_ratio", r.hls_ratio},
              {"sign_change", r.sign_change},
              {"level_gap", r.level_gap},
              {"nodal_norm_floor", r.nodal_norm_floor},
              {"ordering_ok", r.ordering_ok}};
}

}  // namespace choq
