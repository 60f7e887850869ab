#pragma once

#include <cstddef>

#include "frida/common/rng.h"
#include "frida/data/dataset.h"
#include "frida/nn/dense_net.h"
#include "frida/nn/sgd.h"

namespace frida::fl {

using nn::ParamVector;

struct LocalTraining {
  std::size_t epochs = 1;
  std::size_t canary_epochs = 3;
  std::size_t batch_size = 64;
  nn::SgdOptions sgd;
};

// One honest client round starting from the broadcast model: `epochs` passes
// of shuffled mini-batch SGD over the shard (short final batch kept), then
// `canary_epochs` full-batch steps on the canary window with the same
// optimizer. Returns the final local parameters.
ParamVector honest_local_round(const nn::Architecture& arch, const ParamVector& global,
                               const data::Dataset& shard, const data::Dataset* canary,
                               const LocalTraining& training, Rng& rng);

struct DpConfig {
  double clip_norm = 0.5;
  double noise_sigma = 1.0;
  double epsilon_label = 0.0;  // reporting only
};

// Clips the update to L2 norm <= clip_norm, then adds N(0, (sigma * clip)^2)
// to every coordinate.
ParamVector dp_noise(const ParamVector& update, const DpConfig& dp, Rng& rng);

}  // namespace frida::fl
