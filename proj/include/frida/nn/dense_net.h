#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "frida/common/rng.h"
#include "frida/nn/param_vector.h"

namespace frida::nn {

// Row-major so that one sample is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Labels = std::vector<int>;

enum class Activation { kRelu, kIdentity };

// Layer widths input -> hidden... -> labels. Hidden layers use ReLU, the
// last layer is linear and feeds softmax cross-entropy.
struct Architecture {
  std::vector<std::size_t> widths;

  static Architecture mlp(std::size_t input_dim, std::vector<std::size_t> hidden,
                          std::size_t num_labels);

  std::size_t input_dim() const { return widths.front(); }
  std::size_t num_labels() const { return widths.back(); }
  std::size_t num_layers() const { return widths.size() - 1; }
  Activation activation(std::size_t layer) const {
    return layer + 1 == num_layers() ? Activation::kIdentity : Activation::kRelu;
  }
  ShapeList shapes() const;
  bool operator==(const Architecture&) const = default;
};

// Structured copy of one layer, used for the flat <-> layered round trip.
struct DenseLayer {
  Matrix weights;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::kRelu;
};

struct LossAndGrad {
  double loss = 0.0;  // mean cross-entropy over the batch
  ParamVector grad;
};

// Dense feed-forward classifier whose parameters live in a flat ParamVector.
class DenseNet {
 public:
  DenseNet(Architecture arch, ParamVector params);
  // He-normal weights, zero biases.
  static DenseNet initialize(const Architecture& arch, Rng& rng);
  static DenseNet from_layers(const std::vector<DenseLayer>& layers);

  const Architecture& architecture() const { return arch_; }
  const ParamVector& params() const { return params_; }
  ParamVector& mutable_params() { return params_; }
  void set_params(ParamVector params);
  std::vector<DenseLayer> to_layers() const;

  // One row of logits per sample.
  Matrix forward(const Matrix& batch) const;
  LossAndGrad loss_and_grad(const Matrix& batch, std::span<const int> labels) const;
  // Cross-entropy of each sample separately.
  std::vector<double> per_sample_loss(const Matrix& batch, std::span<const int> labels) const;
  std::vector<int> predict(const Matrix& batch) const;
  double accuracy(const Matrix& batch, std::span<const int> labels) const;

 private:
  void check_batch(const Matrix& batch) const;
  void check_labels(const Matrix& batch, std::span<const int> labels) const;

  Architecture arch_;
  ParamVector params_;
};

// Numerically stable row-wise softmax.
Matrix softmax_rows(const Matrix& logits);

}  // namespace frida::nn
