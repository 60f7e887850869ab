#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "frida/common/rng.h"
#include "frida/nn/param_vector.h"

namespace frida::freerider {

using nn::ParamVector;

// Broadcast history every client receives. Aggregate gradients are model
// differences: G^{t-1} = M^{t-1} - M^{t-2}.
struct PublicSignals {
  ParamVector model_prev;                    // M^{t-1}
  std::optional<ParamVector> grad_prev;      // G^{t-1}, absent in round 1
  std::optional<ParamVector> grad_prev2;     // G^{t-2}, absent in rounds 1-2
  ParamVector model_initial;                 // M^0
  std::size_t round = 1;                     // t, 1-based
  std::size_t num_clients = 2;               // n in the F^Z geometry
};

enum class StrategyKind { kFraboni, kLin, kZhu };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);

struct StrategyParams {
  double alpha = 1.0;              // noise scale
  double gamma = 1.0;              // decay exponent on t
  double zhu_fraction = 0.6;       // d: share of coordinates receiving noise
  double zhu_lambda = 0.01;        // lambda in E(cos beta) = C^2 / (C^2 + e^{2 lambda t})
  double cold_start_sigma = 0.01;  // stands in for std(G^{t-1}) when no gradient exists yet
};

struct FreeRiderStrategy {
  StrategyKind kind = StrategyKind::kLin;
  StrategyParams params;
};

// M^{t-1} + N(0, (alpha * sigma * t^-gamma)^2) per coordinate, sigma the
// population std of G^{t-1} components (cold_start_sigma in round 1).
ParamVector fraboni_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng);

// M^{t-1} + G^{t-1} + N(0, (alpha * std(G^{t-1}) * t^-gamma)^2). Round 1 has
// no G^0 and behaves like fraboni_update.
ParamVector lin_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng);

// E(cos beta) for the F^Z geometry with C = ||M^{t-1} - M^0|| / ||M^{t-1}||.
double zhu_expected_cosine(const PublicSignals& sig, double lambda);
// phi(t) = sqrt(n^2 / (n + (n^2 - n) E(cos beta)) - 1) * ||G^{t-1}||.
double zhu_phi(std::size_t n, double expected_cosine, double grad_norm);

// M^{t-1} + (||G^{t-1}|| / ||G^{t-2}||) G^{t-1} + noise on a random
// ceil(d * P) coordinate subset with total energy phi(t)^2. Falls back to
// lin_update while G^{t-2} is unavailable (t < 3).
ParamVector zhu_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng);

// Dispatches on strategy.kind. Output is the fake local model M_n^t.
ParamVector fabricate(const FreeRiderStrategy& strategy, const PublicSignals& sig, Rng& rng);

}  // namespace frida::freerider
