#include "frida/nn/dense_net.h"

#include <cmath>
#include <string>

#include "frida/common/errors.h"

namespace frida::nn {

namespace {

using ConstMatrixMap = Eigen::Map<const Matrix>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

ConstMatrixMap weights_of(const ParamVector& p, std::size_t layer) {
  const auto& s = p.shapes()[layer];
  return ConstMatrixMap(p.layer_weights(layer).data(), static_cast<Eigen::Index>(s.rows),
                        static_cast<Eigen::Index>(s.cols));
}

ConstVectorMap bias_of(const ParamVector& p, std::size_t layer) {
  const auto b = p.layer_bias(layer);
  return ConstVectorMap(b.data(), static_cast<Eigen::Index>(b.size()));
}

void apply_activation(Matrix& z, Activation act) {
  if (act == Activation::kRelu) z = z.cwiseMax(0.0);
}

}  // namespace

Architecture Architecture::mlp(std::size_t input_dim, std::vector<std::size_t> hidden,
                               std::size_t num_labels) {
  Architecture a;
  a.widths.push_back(input_dim);
  for (auto h : hidden) a.widths.push_back(h);
  a.widths.push_back(num_labels);
  return a;
}

ShapeList Architecture::shapes() const {
  ShapeList s;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) s.push_back({widths[i + 1], widths[i], true});
  return s;
}

DenseNet::DenseNet(Architecture arch, ParamVector params)
    : arch_(std::move(arch)), params_(std::move(params)) {
  if (arch_.widths.size() < 2) throw InvalidInput("DenseNet: need at least one layer");
  for (auto w : arch_.widths) {
    if (w == 0) throw InvalidInput("DenseNet: zero-width layer");
  }
  if (params_.shapes() != arch_.shapes()) {
    throw ShapeError("DenseNet: parameter shapes do not match the architecture");
  }
}

DenseNet DenseNet::initialize(const Architecture& arch, Rng& rng) {
  ParamVector p(arch.shapes());
  for (std::size_t layer = 0; layer < arch.num_layers(); ++layer) {
    const double fan_in = static_cast<double>(arch.widths[layer]);
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
    for (auto& w : p.layer_weights(layer)) w = normal(rng);
  }
  return DenseNet(arch, std::move(p));
}

DenseNet DenseNet::from_layers(const std::vector<DenseLayer>& layers) {
  if (layers.empty()) throw InvalidInput("DenseNet::from_layers: no layers");
  Architecture arch;
  arch.widths.push_back(static_cast<std::size_t>(layers.front().weights.cols()));
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (static_cast<std::size_t>(l.weights.cols()) != arch.widths.back()) {
      throw ShapeError("DenseNet::from_layers: layer " + std::to_string(i) +
                       " input width does not chain");
    }
    if (l.bias.size() != l.weights.rows()) {
      throw ShapeError("DenseNet::from_layers: bias length mismatch");
    }
    arch.widths.push_back(static_cast<std::size_t>(l.weights.rows()));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].activation != arch.activation(i)) {
      throw InvalidInput("DenseNet::from_layers: hidden layers must be ReLU, output linear");
    }
  }
  ParamVector p(arch.shapes());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& s = p.shapes()[i];
    MatrixMap(p.layer_weights(i).data(), static_cast<Eigen::Index>(s.rows),
              static_cast<Eigen::Index>(s.cols)) = layers[i].weights;
    auto b = p.layer_bias(i);
    VectorMap(b.data(), static_cast<Eigen::Index>(b.size())) = layers[i].bias;
  }
  return DenseNet(std::move(arch), std::move(p));
}

void DenseNet::set_params(ParamVector params) {
  if (params.shapes() != arch_.shapes()) throw ShapeError("DenseNet::set_params: shape mismatch");
  params_ = std::move(params);
}

std::vector<DenseLayer> DenseNet::to_layers() const {
  std::vector<DenseLayer> out;
  for (std::size_t i = 0; i < arch_.num_layers(); ++i) {
    out.push_back({weights_of(params_, i), bias_of(params_, i), arch_.activation(i)});
  }
  return out;
}

void DenseNet::check_batch(const Matrix& batch) const {
  if (static_cast<std::size_t>(batch.cols()) != arch_.input_dim()) {
    throw ShapeError("DenseNet: batch width " + std::to_string(batch.cols()) +
                     " != input width " + std::to_string(arch_.input_dim()));
  }
}

void DenseNet::check_labels(const Matrix& batch, std::span<const int> labels) const {
  if (batch.rows() == 0) throw InvalidInput("DenseNet: empty batch");
  if (static_cast<std::size_t>(batch.rows()) != labels.size()) {
    throw ShapeError("DenseNet: batch rows and label count differ");
  }
  const int l = static_cast<int>(arch_.num_labels());
  for (int y : labels) {
    if (y < 0 || y >= l) throw InvalidInput("DenseNet: label out of range");
  }
}

Matrix DenseNet::forward(const Matrix& batch) const {
  check_batch(batch);
  Matrix a = batch;
  for (std::size_t i = 0; i < arch_.num_layers(); ++i) {
    Matrix z = a * weights_of(params_, i).transpose();
    z.rowwise() += bias_of(params_, i).transpose();
    apply_activation(z, arch_.activation(i));
    a = std::move(z);
  }
  return a;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix p = logits;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    const double m = p.row(r).maxCoeff();
    p.row(r) = (p.row(r).array() - m).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

namespace {

// log-sum-exp(row) - row[y]
double cross_entropy(const Eigen::Ref<const Eigen::RowVectorXd>& row, int y) {
  const double m = row.maxCoeff();
  const double lse = m + std::log((row.array() - m).exp().sum());
  return lse - row(y);
}

}  // namespace

LossAndGrad DenseNet::loss_and_grad(const Matrix& batch, std::span<const int> labels) const {
  check_batch(batch);
  check_labels(batch, labels);
  const std::size_t n_layers = arch_.num_layers();
  const auto n = static_cast<double>(batch.rows());

  // Keep every layer's post-activation output for the backward pass.
  std::vector<Matrix> acts;
  acts.reserve(n_layers + 1);
  acts.push_back(batch);
  for (std::size_t i = 0; i < n_layers; ++i) {
    Matrix z = acts.back() * weights_of(params_, i).transpose();
    z.rowwise() += bias_of(params_, i).transpose();
    apply_activation(z, arch_.activation(i));
    acts.push_back(std::move(z));
  }

  const Matrix& logits = acts.back();
  double loss = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) loss += cross_entropy(logits.row(r), labels[r]);
  loss /= n;

  Matrix delta = softmax_rows(logits);
  for (Eigen::Index r = 0; r < delta.rows(); ++r) delta(r, labels[r]) -= 1.0;
  delta /= n;

  LossAndGrad out{loss, ParamVector(arch_.shapes())};
  for (std::size_t i = n_layers; i-- > 0;) {
    const auto& s = out.grad.shapes()[i];
    MatrixMap(out.grad.layer_weights(i).data(), static_cast<Eigen::Index>(s.rows),
              static_cast<Eigen::Index>(s.cols)) = delta.transpose() * acts[i];
    auto gb = out.grad.layer_bias(i);
    VectorMap(gb.data(), static_cast<Eigen::Index>(gb.size())) = delta.colwise().sum().transpose();
    if (i > 0) {
      Matrix back = delta * weights_of(params_, i);
      // ReLU derivative: acts[i] is the post-activation output of layer i-1.
      back = back.cwiseProduct((acts[i].array() > 0.0).cast<double>().matrix());
      delta = std::move(back);
    }
  }
  return out;
}

std::vector<double> DenseNet::per_sample_loss(const Matrix& batch,
                                              std::span<const int> labels) const {
  check_labels(batch, labels);
  const Matrix logits = forward(batch);
  std::vector<double> out(labels.size());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) out[r] = cross_entropy(logits.row(r), labels[r]);
  return out;
}

std::vector<int> DenseNet::predict(const Matrix& batch) const {
  const Matrix logits = forward(batch);
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index arg = 0;
    logits.row(r).maxCoeff(&arg);
    out[r] = static_cast<int>(arg);
  }
  return out;
}

double DenseNet::accuracy(const Matrix& batch, std::span<const int> labels) const {
  check_labels(batch, labels);
  const auto pred = predict(batch);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == labels[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace frida::nn
