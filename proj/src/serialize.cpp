#include "meshspectra/serialize.hpp"

#include "meshspectra/errors.hpp"

namespace meshspectra {

LossWeights loss_weights_from_json(const nlohmann::json& j) {
  LossWeights weights;
  try {
    if (j.contains("lambda_J")) weights.lambda_j = j.at("lambda_J").get<double>();
    if (j.contains("lambda_v")) {
      const auto v = j.at("lambda_v").get<std::vector<double>>();
      if (v.size() != 3) throw ParseError("lambda_v must have 3 entries");
      std::copy(v.begin(), v.end(), weights.lambda_v.begin());
    }
    if (j.contains("lambda_F")) {
      const auto f = j.at("lambda_F").get<std::vector<double>>();
      if (f.size() != 3) throw ParseError("lambda_F must have 3 entries");
      std::copy(f.begin(), f.end(), weights.lambda_f.begin());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("weights JSON: ") + e.what());
  }
  for (double w : {weights.lambda_j, weights.lambda_v[0], weights.lambda_v[1],
                   weights.lambda_v[2], weights.lambda_f[0], weights.lambda_f[1],
                   weights.lambda_f[2]}) {
    if (w < 0.0) throw ParseError("loss weights must be non-negative");
  }
  return weights;
}

}  // namespace meshspectra
