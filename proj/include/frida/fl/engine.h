#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "frida/fl/config.h"
#include "frida/fl/detectors.h"
#include "frida/nn/param_vector.h"
#include "frida/pia/label_inference.h"

namespace frida::fl {

// Server-side view after the client phase of round t.
struct RoundState {
  std::size_t t = 0;
  nn::ParamVector global_model;                 // M^{t-1}
  std::vector<nn::ParamVector> client_updates;  // G_n^t = M_n^t - M^{t-1}
  std::vector<std::size_t> client_sizes;        // reported |D_n|
  std::vector<std::size_t> canary_indices;      // pool indices of the round window
  std::vector<pia::LabelDistribution> label_dists;       // L_n^t (PIA runs only)
  std::vector<pia::LabelDistribution> prev_label_dists;  // L_n^{t-1}
};

struct RoundRecord {
  RoundState state;
  std::vector<DetectionOutput> detections;
  std::vector<bool> truth;     // true = free-rider
  std::vector<bool> excluded;  // clients left out of aggregation
  nn::ParamVector new_global;  // M^t
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

using RoundObserver = std::function<void(const RoundRecord&)>;

// Runs cfg.rounds rounds of FedAvg with detection, calling `observer` once
// per round in order. The config must already be validated.
void run_experiment(const ExperimentConfig& cfg, const RoundObserver& observer);

// Convenience wrapper keeping every record.
std::vector<RoundRecord> run_experiment(const ExperimentConfig& cfg);

}  // namespace frida::fl
