#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frida/common/rng.h"
#include "frida/nn/param_vector.h"
#include "frida/stats/decision.h"

namespace frida::baseline {

using nn::ParamVector;

enum class Feature { kL2, kStd, kCosim };
const char* to_string(Feature f);

struct FeatureScores {
  Feature feature = Feature::kL2;
  std::vector<double> scores;  // one per client
  // kCosim only: the round's shared reference client, and the stand-in
  // reference the reference client itself was compared against.
  std::size_t reference_client = 0;
  std::size_t self_reference_substitute = 0;
};

FeatureScores l2_feature(std::span<const ParamVector> updates);
// Population std of each update's coordinates. Throws InvalidInput when an
// update has fewer than two coordinates.
FeatureScores std_feature(std::span<const ParamVector> updates);
// Cosine similarity of every update to one reference client drawn uniformly
// for the round; the reference itself is compared to a second uniform draw
// among the other clients. Zero-norm updates score 0.
FeatureScores cosim_feature(std::span<const ParamVector> updates, Rng& rng);

// Two-sided z-test, |z| > tau.
std::vector<stats::ZVerdict> feature_decide(std::span<const double> scores, double tau);

}  // namespace frida::baseline
