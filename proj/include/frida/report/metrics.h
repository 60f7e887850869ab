#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace frida::report {

struct RoundMetrics {
  std::size_t round = 0;
  std::string detector;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fpr = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;

  bool operator==(const RoundMetrics&) const = default;
};

// Confusion counts with free-riders as the positive class. Ratios with a
// zero denominator are 0. Throws InvalidInput on a length mismatch.
RoundMetrics compute_metrics(const std::vector<bool>& flags, const std::vector<bool>& truth);

// Arithmetic mean of per-round F1 for one detector (0 when absent).
double mean_f1(const std::vector<RoundMetrics>& rows, const std::string& detector);

}  // namespace frida::report
