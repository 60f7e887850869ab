#include "frida/nn/sgd.h"

#include "frida/common/errors.h"

namespace frida::nn {

SgdState::SgdState(SgdOptions options, const ParamVector& like)
    : options_(options), velocity_(ParamVector::zeros_like(like)) {
  if (options_.momentum < 0.0 || options_.momentum >= 1.0) {
    throw InvalidInput("SgdState: momentum must lie in [0, 1)");
  }
}

void SgdState::step(ParamVector& params, const ParamVector& grad) {
  if (!params.same_shape(grad) || !params.same_shape(velocity_)) {
    throw ShapeError("SgdState::step: shape mismatch");
  }
  auto v = velocity_.values();
  auto theta = params.values();
  const auto g = grad.values();
  const double mu = options_.momentum;
  const double wd = options_.weight_decay;
  const double lr = options_.learning_rate;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = mu * v[i] + g[i] + wd * theta[i];
    theta[i] -= lr * v[i];
  }
}

}  // namespace frida::nn
