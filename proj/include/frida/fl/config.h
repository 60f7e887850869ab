#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frida/data/dataset.h"
#include "frida/data/partition.h"
#include "frida/fl/client.h"
#include "frida/freerider/strategies.h"
#include "frida/nn/sgd.h"

namespace frida::fl {

// Detector identifiers accepted in ExperimentConfig::detectors.
inline constexpr const char* kLossMia = "loss_mia";
inline constexpr const char* kCosineMia = "cosine_mia";
inline constexpr const char* kConsistencyPia = "consistency_pia";
inline constexpr const char* kDiversityPia = "diversity_pia";
inline constexpr const char* kL2 = "l2";
inline constexpr const char* kStd = "std";
inline constexpr const char* kCosim = "cosim";
// Ground-truth reference detector (flags exactly the free-riders).
inline constexpr const char* kOracle = "oracle";

const std::vector<std::string>& known_detectors();

enum class PiaAttack { kWainakh, kDai };

struct DetectorSettings {
  std::vector<std::string> enabled = {kLossMia, kCosineMia, kConsistencyPia, kDiversityPia};
  double tau_loss = 1.0;
  double alpha_cosine = 0.05;
  double tau_pia = 1.0;
  double tau_feature = 1.0;
  PiaAttack pia_attack = PiaAttack::kWainakh;
  std::size_t aux_per_label = 20;

  bool has(const std::string& name) const;
};

// A non-honest client. Strategy clients fabricate updates from public
// signals; selfish clients train only on the canary window.
struct FreeRiderSpec {
  enum class Kind { kStrategy, kSelfish };
  std::size_t client = 0;
  Kind kind = Kind::kStrategy;
  freerider::FreeRiderStrategy strategy;
  std::size_t selfish_canary_epochs = 3;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t num_clients = 0;
  std::size_t rounds = 0;
  std::size_t samples_per_client = 200;
  LocalTraining training;

  std::vector<std::size_t> hidden = {32};
  int num_labels = 10;
  std::size_t input_dim = 32;
  data::BlobOptions blob;
  data::PartitionScheme partition = data::PartitionScheme::iid();
  // Client c holds only label c mod l (overrides `partition` when set).
  bool label_shards = false;
  std::size_t test_samples = 1000;

  std::size_t canary_size = 100;
  // 0 = derive as canary_size * max(rounds, 2).
  std::size_t canary_pool = 0;

  std::optional<DpConfig> dp;
  std::vector<FreeRiderSpec> freeriders;
  DetectorSettings detectors;

  bool mitigate = false;
  // Empty = first enabled detector.
  std::string mitigation_detector;
  std::size_t skip_rounds = 0;
  std::size_t threads = 1;
  std::size_t repeats = 1;
  std::string output_dir;

  std::size_t effective_canary_pool() const;
  const FreeRiderSpec* freerider_for(std::size_t client) const;
  std::vector<bool> truth() const;
  bool canaries_enabled() const;
};

// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& cfg);

}  // namespace frida::fl
