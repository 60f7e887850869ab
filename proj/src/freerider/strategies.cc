#include "frida/freerider/strategies.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "frida/common/errors.h"

namespace frida::freerider {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kFraboni: return "fraboni";
    case StrategyKind::kLin: return "lin";
    case StrategyKind::kZhu: return "zhu";
  }
  return "unknown";
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "fraboni") return StrategyKind::kFraboni;
  if (name == "lin") return StrategyKind::kLin;
  if (name == "zhu") return StrategyKind::kZhu;
  throw InvalidInput("unknown free-rider strategy '" + name + "'");
}

namespace {

void check_round(const PublicSignals& sig) {
  if (sig.round < 1) throw InvalidInput("free-rider: rounds are 1-based");
}

void add_gaussian(ParamVector& v, double sd, Rng& rng) {
  if (!(sd > 0.0)) return;
  std::normal_distribution<double> normal(0.0, sd);
  for (auto& x : v.values()) x += normal(rng);
}

double decayed_sigma(const PublicSignals& sig, const StrategyParams& p) {
  const double base = sig.grad_prev ? nn::component_std(sig.grad_prev->values()) : p.cold_start_sigma;
  return p.alpha * base * std::pow(static_cast<double>(sig.round), -p.gamma);
}

}  // namespace

ParamVector fraboni_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng) {
  check_round(sig);
  ParamVector out = sig.model_prev;
  add_gaussian(out, decayed_sigma(sig, params), rng);
  return out;
}

ParamVector lin_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng) {
  check_round(sig);
  if (!sig.grad_prev) return fraboni_update(sig, params, rng);
  ParamVector out = sig.model_prev + *sig.grad_prev;
  add_gaussian(out, decayed_sigma(sig, params), rng);
  return out;
}

double zhu_expected_cosine(const PublicSignals& sig, double lambda) {
  const double model_norm = nn::l2_norm(sig.model_prev);
  const double c = model_norm > 0.0 ? nn::l2_norm(sig.model_prev - sig.model_initial) / model_norm : 0.0;
  const double growth = std::exp(2.0 * lambda * static_cast<double>(sig.round));
  return c * c / (c * c + growth);
}

double zhu_phi(std::size_t n, double expected_cosine, double grad_norm) {
  const double nn_ = static_cast<double>(n);
  const double ratio_sq = nn_ * nn_ / (nn_ + (nn_ * nn_ - nn_) * expected_cosine);
  // ratio_sq >= 1 whenever E(cos) <= 1; clamp rounding below zero.
  return std::sqrt(std::max(0.0, ratio_sq - 1.0)) * grad_norm;
}

ParamVector zhu_update(const PublicSignals& sig, const StrategyParams& params, Rng& rng) {
  check_round(sig);
  if (!(params.zhu_fraction > 0.0) || params.zhu_fraction > 1.0) {
    throw InvalidInput("zhu_update: fraction d must lie in (0, 1]");
  }
  if (sig.round < 3 || !sig.grad_prev || !sig.grad_prev2) return lin_update(sig, params, rng);

  const ParamVector& g1 = *sig.grad_prev;
  const double n1 = nn::l2_norm(g1);
  const double n2 = nn::l2_norm(*sig.grad_prev2);
  const double scale = n2 > 0.0 ? n1 / n2 : 1.0;
  ParamVector out = sig.model_prev;
  out.axpy(scale, g1);

  const double phi = zhu_phi(sig.num_clients, zhu_expected_cosine(sig, params.zhu_lambda), n1);
  const std::size_t p = out.size();
  const auto k = static_cast<std::size_t>(std::ceil(params.zhu_fraction * static_cast<double>(p)));
  if (phi > 0.0 && k > 0) {
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, p - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    std::normal_distribution<double> normal(0.0, phi / std::sqrt(static_cast<double>(k)));
    for (std::size_t i = 0; i < k; ++i) out[idx[i]] += normal(rng);
  }
  return out;
}

ParamVector fabricate(const FreeRiderStrategy& strategy, const PublicSignals& sig, Rng& rng) {
  switch (strategy.kind) {
    case StrategyKind::kFraboni: return fraboni_update(sig, strategy.params, rng);
    case StrategyKind::kLin: return lin_update(sig, strategy.params, rng);
    case StrategyKind::kZhu: return zhu_update(sig, strategy.params, rng);
  }
  throw InvalidInput("fabricate: unknown strategy");
}

}  // namespace frida::freerider
