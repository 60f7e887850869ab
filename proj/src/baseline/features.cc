#include "frida/baseline/features.h"

#include "frida/common/errors.h"

namespace frida::baseline {

const char* to_string(Feature f) {
  switch (f) {
    case Feature::kL2: return "l2";
    case Feature::kStd: return "std";
    case Feature::kCosim: return "cosim";
  }
  return "unknown";
}

FeatureScores l2_feature(std::span<const ParamVector> updates) {
  if (updates.empty()) throw InvalidInput("l2_feature: no clients");
  FeatureScores out{Feature::kL2, {}, 0, 0};
  for (const auto& u : updates) out.scores.push_back(nn::l2_norm(u));
  return out;
}

FeatureScores std_feature(std::span<const ParamVector> updates) {
  if (updates.empty()) throw InvalidInput("std_feature: no clients");
  FeatureScores out{Feature::kStd, {}, 0, 0};
  for (const auto& u : updates) {
    if (u.size() < 2) throw InvalidInput("std_feature: update needs at least 2 coordinates");
    out.scores.push_back(nn::component_std(u.values()));
  }
  return out;
}

FeatureScores cosim_feature(std::span<const ParamVector> updates, Rng& rng) {
  const std::size_t n = updates.size();
  if (n < 2) throw InvalidInput("cosim_feature: need at least 2 clients");
  FeatureScores out{Feature::kCosim, std::vector<double>(n, 0.0), 0, 0};
  out.reference_client = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  // Uniform over the other n-1 clients.
  std::size_t alt = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
  if (alt >= out.reference_client) ++alt;
  out.self_reference_substitute = alt;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ref = i == out.reference_client ? alt : out.reference_client;
    out.scores[i] = nn::cosine_similarity(updates[i].values(), updates[ref].values());
  }
  return out;
}

std::vector<stats::ZVerdict> feature_decide(std::span<const double> scores, double tau) {
  return stats::z_test(scores, tau, stats::Sidedness::kTwoSided);
}

}  // namespace frida::baseline
