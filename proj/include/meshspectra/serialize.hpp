#pragma once

#include <json.hpp>

#include "meshspectra/mesh.hpp"
#include "meshspectra/metrics.hpp"

namespace meshspectra {

inline void to_json(nlohmann::json& j, const ValidationReport& report) {
  j = nlohmann::json{
      {"euler_characteristic", report.euler_characteristic},
      {"boundary_edge_count", report.boundary_edge_count},
      {"non_manifold_edge_count", report.non_manifold_edge_count},
      {"connected_component_count", report.connected_component_count},
  };
}

inline void to_json(nlohmann::json& j, const MsnrReport& report) {
  j = nlohmann::json{
      {"mean", report.mean},
      {"clamp_count", report.clamp_count},
  };
}

/// Parses the weight JSON accepted on the command line:
/// {"lambda_J": 1, "lambda_v": [1,1,1], "lambda_F": [60,60,100]}.
/// Missing keys keep their defaults.
LossWeights loss_weights_from_json(const nlohmann::json& j);

inline void to_json(nlohmann::json& j, const LossWeights& weights) {
  j = nlohmann::json{
      {"lambda_J", weights.lambda_j},
      {"lambda_v", weights.lambda_v},
      {"lambda_F", weights.lambda_f},
  };
}

}  // namespace meshspectra
