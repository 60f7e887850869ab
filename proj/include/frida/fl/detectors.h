#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "frida/common/rng.h"
#include "frida/data/canary.h"
#include "frida/fl/config.h"
#include "frida/nn/dense_net.h"
#include "frida/pia/label_inference.h"

namespace frida::fl {

// One detail row for scores.csv. sample is -1 for per-client scores.
struct ScoreRecord {
  std::size_t client = 0;
  std::string kind;
  long sample = -1;
  double score = 0.0;
};

struct DetectionOutput {
  std::string detector;
  std::vector<double> client_scores;
  std::vector<bool> flags;
  std::vector<ScoreRecord> details;
};

// Everything the server holds when it runs detection in round t.
struct RoundContext {
  std::size_t round = 0;
  const nn::Architecture* arch = nullptr;
  const nn::ParamVector* global = nullptr;  // M^{t-1}
  std::span<const nn::ParamVector> updates;  // G_n^t
  std::span<const std::size_t> client_sizes;  // reported |D_n|
  const data::CanarySet* canaries = nullptr;
  const data::CanaryBatch* window = nullptr;
  // Inferred label distributions (filled when a PIA detector is enabled).
  std::span<const pia::LabelDistribution> label_dists;
  std::span<const pia::LabelDistribution> prev_label_dists;
  // Ground truth; only the oracle reference detector reads it.
  const std::vector<bool>* truth = nullptr;
  Rng* rng = nullptr;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::string name() const = 0;
  virtual bool needs_label_distributions() const { return false; }
  virtual bool needs_canaries() const { return false; }
  virtual DetectionOutput run(const RoundContext& ctx) = 0;
};

std::unique_ptr<Detector> make_detector(const std::string& name, const DetectorSettings& settings);

}  // namespace frida::fl
