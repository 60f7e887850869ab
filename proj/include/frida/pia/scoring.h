#pragma once

#include <span>
#include <vector>

#include "frida/pia/label_inference.h"
#include "frida/stats/decision.h"

namespace frida::pia {

// Euclidean distance between consecutive inferred distributions.
double consistency_score(const LabelDistribution& curr, const LabelDistribution& prev);

inline constexpr double kDiversityFloor = 1e-12;

struct DiversityFit {
  double alpha = 0.0;  // weight on the global distribution
  double beta = 0.0;   // weight on the uniform distribution
  double mse = 0.0;
  bool collinear = false;  // global == uniform direction: beta dropped
  double score = 0.0;      // log(mse + kDiversityFloor)
};

// Least-squares fit L_n ~ alpha * L_global + beta * uniform.
DiversityFit diversity_fit(const LabelDistribution& client, const LabelDistribution& global);
double diversity_score(const LabelDistribution& client, const LabelDistribution& global);

enum class PiaMode { kConsistency, kDiversity };

// Two-sided z-test: flags |z| > tau.
std::vector<stats::ZVerdict> pia_decide(std::span<const double> scores, double tau, PiaMode mode);

}  // namespace frida::pia
