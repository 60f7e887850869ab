#include "frida/fl/config.h"

#include <algorithm>
#include <set>
#include <string>

#include "frida/common/errors.h"

namespace frida::fl {

const std::vector<std::string>& known_detectors() {
  static const std::vector<std::string> kNames = {kLossMia, kCosineMia, kConsistencyPia,
                                                  kDiversityPia, kL2, kStd, kCosim, kOracle};
  return kNames;
}

bool DetectorSettings::has(const std::string& name) const {
  return std::find(enabled.begin(), enabled.end(), name) != enabled.end();
}

std::size_t ExperimentConfig::effective_canary_pool() const {
  if (canary_pool > 0) return canary_pool;
  return canary_size * std::max<std::size_t>(rounds, 2);
}

const FreeRiderSpec* ExperimentConfig::freerider_for(std::size_t client) const {
  for (const auto& f : freeriders) {
    if (f.client == client) return &f;
  }
  return nullptr;
}

std::vector<bool> ExperimentConfig::truth() const {
  std::vector<bool> t(num_clients, false);
  for (const auto& f : freeriders) {
    if (f.client < num_clients) t[f.client] = true;
  }
  return t;
}

bool ExperimentConfig::canaries_enabled() const {
  if (canary_size == 0) return false;
  if (training.canary_epochs > 0 || detectors.has(kLossMia) || detectors.has(kCosineMia)) return true;
  return std::any_of(freeriders.begin(), freeriders.end(),
                     [](const FreeRiderSpec& f) { return f.kind == FreeRiderSpec::Kind::kSelfish; });
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) fail(key, "must be > 0");
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.num_clients < 3) fail("clients.count", "need at least 3 clients for cohort z-tests");
  if (cfg.rounds < 1) fail("run.rounds", "must be >= 1");
  if (cfg.samples_per_client < 1) fail("clients.samples", "must be >= 1");
  if (cfg.training.batch_size < 1) fail("clients.batch_size", "must be >= 1");
  require_positive(cfg.training.sgd.learning_rate, "optim.learning_rate");
  if (cfg.training.sgd.momentum < 0.0 || cfg.training.sgd.momentum >= 1.0) {
    fail("optim.momentum", "must lie in [0, 1)");
  }
  if (cfg.training.sgd.weight_decay < 0.0) fail("optim.weight_decay", "must be >= 0");
  if (cfg.num_labels < 2) fail("data.labels", "need at least 2 labels");
  if (cfg.input_dim < 2) fail("data.input_dim", "must be >= 2");
  for (auto h : cfg.hidden) {
    if (h == 0) fail("model.hidden", "widths must be positive");
  }
  require_positive(cfg.blob.spread, "data.spread");
  if (cfg.blob.separation < 0.0) fail("data.separation", "must be >= 0");
  if (cfg.partition.kind == data::PartitionScheme::Kind::kDirichlet) {
    require_positive(cfg.partition.alpha, "data.dirichlet_alpha");
  }
  if (cfg.test_samples < 1) fail("data.test_samples", "must be >= 1");

  if (cfg.canaries_enabled()) {
    if (cfg.effective_canary_pool() < cfg.canary_size * cfg.rounds) {
      fail("canary.pool", "pool must hold canary.size * run.rounds samples");
    }
    if (cfg.detectors.has(kCosineMia)) {
      if (cfg.canary_size < 2) fail("canary.size", "cosine_mia needs at least 2 canaries per round");
      if (cfg.effective_canary_pool() < 2 * cfg.canary_size) {
        fail("canary.pool", "cosine_mia needs a complement window as large as canary.size");
      }
    }
  } else if (cfg.detectors.has(kLossMia) || cfg.detectors.has(kCosineMia)) {
    fail("canary.size", "MIA detectors need canary.size > 0");
  }

  if (cfg.dp) {
    require_positive(cfg.dp->clip_norm, "dp.clip_norm");
    if (cfg.dp->noise_sigma < 0.0) fail("dp.noise_sigma", "must be >= 0");
  }

  std::set<std::size_t> seen;
  for (const auto& f : cfg.freeriders) {
    const std::string key = "freerider." + std::to_string(f.client);
    if (f.client >= cfg.num_clients) fail(key, "client index out of range [0, clients.count)");
    if (!seen.insert(f.client).second) fail(key, "duplicate free-rider entry");
    if (f.kind == FreeRiderSpec::Kind::kStrategy) {
      const auto& p = f.strategy.params;
      if (p.alpha < 0.0) fail(key + ".alpha", "must be >= 0");
      if (!(p.zhu_fraction > 0.0) || p.zhu_fraction > 1.0) fail(key + ".zhu_fraction", "must lie in (0, 1]");
      if (p.cold_start_sigma < 0.0) fail(key + ".cold_start_sigma", "must be >= 0");
    }
  }

  const auto& d = cfg.detectors;
  for (const auto& name : d.enabled) {
    const auto& known = known_detectors();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      fail("detect.enabled", "unknown detector '" + name + "'");
    }
  }
  require_positive(d.tau_loss, "detect.tau_loss");
  if (!(d.alpha_cosine > 0.0) || d.alpha_cosine >= 1.0) fail("detect.alpha_cosine", "must lie in (0, 1)");
  require_positive(d.tau_pia, "detect.tau_pia");
  require_positive(d.tau_feature, "detect.tau_feature");
  if (d.aux_per_label < 1) fail("detect.aux_per_label", "must be >= 1");

  if (cfg.mitigate) {
    if (d.enabled.empty()) fail("run.mitigate", "mitigation needs at least one enabled detector");
    if (!cfg.mitigation_detector.empty() && !d.has(cfg.mitigation_detector)) {
      fail("run.mitigation_detector", "detector '" + cfg.mitigation_detector + "' is not enabled");
    }
  }
  if (cfg.skip_rounds >= cfg.rounds) fail("run.skip_rounds", "must be < run.rounds");
  if (cfg.threads < 1) fail("run.threads", "must be >= 1");
  if (cfg.repeats < 1) fail("run.repeats", "must be >= 1");
}

}  // namespace frida::fl
