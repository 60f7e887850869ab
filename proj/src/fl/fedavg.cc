#include "frida/fl/fedavg.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "frida/common/errors.h"

namespace frida::fl {

nn::ParamVector fedavg(std::span<const nn::ParamVector> models, std::span<const std::size_t> sizes) {
  if (models.empty()) throw InvalidInput("fedavg: no client models");
  if (models.size() != sizes.size()) throw InvalidInput("fedavg: models and sizes differ in length");
  double total = 0.0;
  for (auto s : sizes) total += static_cast<double>(s);
  if (!(total > 0.0)) throw InvalidInput("fedavg: total dataset size is zero");

  for (const auto& m : models) {
    if (!m.same_shape(models.front())) throw ShapeError("fedavg: client model shapes differ");
  }
  // Accumulate in a canonical order so the result is bit-identical under any
  // permutation of the clients.
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] < sizes[b];
    const auto va = models[a].values();
    const auto vb = models[b].values();
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  });
  nn::ParamVector out = nn::ParamVector::zeros_like(models.front());
  for (auto i : order) out.axpy(static_cast<double>(sizes[i]) / total, models[i]);
  return out;
}

}  // namespace frida::fl
