#pragma once

#include "frida/nn/param_vector.h"

namespace frida::nn {

struct SgdOptions {
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 1e-5;
};

// SGD with heavy-ball momentum and L2 weight decay folded into the gradient:
//   v <- momentum * v + grad + weight_decay * theta
//   theta <- theta - learning_rate * v
class SgdState {
 public:
  SgdState(SgdOptions options, const ParamVector& like);

  const SgdOptions& options() const { return options_; }
  const ParamVector& velocity() const { return velocity_; }

  void step(ParamVector& params, const ParamVector& grad);

 private:
  SgdOptions options_;
  ParamVector velocity_;
};

}  // namespace frida::nn
