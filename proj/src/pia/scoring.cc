#include "frida/pia/scoring.h"

#include <cmath>

#include "frida/common/errors.h"

namespace frida::pia {

double consistency_score(const LabelDistribution& curr, const LabelDistribution& prev) {
  if (curr.size() != prev.size()) throw ShapeError("consistency_score: label counts differ");
  double ss = 0.0;
  for (std::size_t j = 0; j < curr.size(); ++j) {
    const double d = curr.probs[j] - prev.probs[j];
    ss += d * d;
  }
  return std::sqrt(ss);
}

DiversityFit diversity_fit(const LabelDistribution& client, const LabelDistribution& global) {
  const std::size_t l = client.size();
  if (l < 2) throw InvalidInput("diversity_fit: need at least 2 labels");
  if (global.size() != l) throw ShapeError("diversity_fit: label counts differ");
  const double u = 1.0 / static_cast<double>(l);
  double gg = 0.0, gu = 0.0, uu = 0.0, gy = 0.0, uy = 0.0;
  for (std::size_t j = 0; j < l; ++j) {
    const double g = global.probs[j];
    const double y = client.probs[j];
    gg += g * g;
    gu += g * u;
    uu += u * u;
    gy += g * y;
    uy += u * y;
  }
  DiversityFit fit;
  const double det = gg * uu - gu * gu;
  if (det <= 1e-12 * gg * uu) {
    fit.collinear = true;
    fit.alpha = gg > 0.0 ? gy / gg : 0.0;
    fit.beta = 0.0;
  } else {
    fit.alpha = (uu * gy - gu * uy) / det;
    fit.beta = (gg * uy - gu * gy) / det;
  }
  double ss = 0.0;
  for (std::size_t j = 0; j < l; ++j) {
    const double r = client.probs[j] - (fit.alpha * global.probs[j] + fit.beta * u);
    ss += r * r;
  }
  fit.mse = ss / static_cast<double>(l);
  fit.score = std::log(fit.mse + kDiversityFloor);
  return fit;
}

double diversity_score(const LabelDistribution& client, const LabelDistribution& global) {
  return diversity_fit(client, global).score;
}

std::vector<stats::ZVerdict> pia_decide(std::span<const double> scores, double tau, PiaMode) {
  return stats::z_test(scores, tau, stats::Sidedness::kTwoSided);
}

}  // namespace frida::pia
