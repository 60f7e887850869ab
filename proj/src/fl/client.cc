#include "frida/fl/client.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "frida/common/errors.h"

namespace frida::fl {

ParamVector honest_local_round(const nn::Architecture& arch, const ParamVector& global,
                               const data::Dataset& shard, const data::Dataset* canary,
                               const LocalTraining& training, Rng& rng) {
  if (training.epochs > 0 && shard.empty()) throw InvalidInput("honest_local_round: empty shard");
  if (training.batch_size == 0) throw InvalidInput("honest_local_round: batch size must be positive");
  nn::DenseNet net(arch, global);
  nn::SgdState opt(training.sgd, global);

  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t e = 0; e < training.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t lo = 0; lo < order.size(); lo += training.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + training.batch_size);
      const data::Dataset batch =
          shard.subset(std::span<const std::size_t>(order.data() + lo, hi - lo));
      const auto lg = net.loss_and_grad(batch.features, batch.labels);
      opt.step(net.mutable_params(), lg.grad);
    }
  }
  if (canary != nullptr && !canary->empty()) {
    for (std::size_t e = 0; e < training.canary_epochs; ++e) {
      const auto lg = net.loss_and_grad(canary->features, canary->labels);
      opt.step(net.mutable_params(), lg.grad);
    }
  }
  return net.params();
}

ParamVector dp_noise(const ParamVector& update, const DpConfig& dp, Rng& rng) {
  if (!(dp.clip_norm > 0.0)) throw InvalidInput("dp_noise: clip_norm must be positive");
  if (dp.noise_sigma < 0.0) throw InvalidInput("dp_noise: noise_sigma must be non-negative");
  ParamVector out = update;
  const double norm = nn::l2_norm(out);
  if (norm > dp.clip_norm) out *= dp.clip_norm / norm;
  const double sd = dp.noise_sigma * dp.clip_norm;
  if (sd > 0.0) {
    std::normal_distribution<double> normal(0.0, sd);
    for (auto& x : out.values()) x += normal(rng);
  }
  return out;
}

}  // namespace frida::fl
