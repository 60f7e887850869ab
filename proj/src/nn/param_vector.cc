#include "frida/nn/param_vector.h"

#include <cmath>
#include <numeric>
#include <string>

#include "frida/common/errors.h"

namespace frida::nn {

std::size_t total_size(const ShapeList& shapes) {
  std::size_t n = 0;
  for (const auto& s : shapes) n += s.size();
  return n;
}

namespace {
const ShapeList& empty_shapes() {
  static const ShapeList kEmpty;
  return kEmpty;
}
}  // namespace

ParamVector::ParamVector(ShapeList shapes)
    : shapes_(std::make_shared<const ShapeList>(std::move(shapes))),
      values_(total_size(*shapes_), 0.0) {}

ParamVector::ParamVector(ShapeList shapes, std::vector<double> values)
    : shapes_(std::make_shared<const ShapeList>(std::move(shapes))),
      values_(std::move(values)) {
  if (values_.size() != total_size(*shapes_)) {
    throw ShapeError("ParamVector: " + std::to_string(values_.size()) +
                     " values for shapes totalling " + std::to_string(total_size(*shapes_)));
  }
}

ParamVector ParamVector::zeros_like(const ParamVector& other) {
  ParamVector out;
  out.shapes_ = other.shapes_;
  out.values_.assign(other.values_.size(), 0.0);
  return out;
}

const ShapeList& ParamVector::shapes() const { return shapes_ ? *shapes_ : empty_shapes(); }

bool ParamVector::same_shape(const ParamVector& other) const {
  return shapes_ == other.shapes_ || shapes() == other.shapes();
}

void ParamVector::check_same_shape(const ParamVector& other) const {
  if (!same_shape(other)) throw ShapeError("ParamVector: shape mismatch");
}

std::size_t ParamVector::layer_offset(std::size_t layer) const {
  const auto& s = shapes();
  if (layer >= s.size()) throw ShapeError("ParamVector: layer index out of range");
  std::size_t off = 0;
  for (std::size_t i = 0; i < layer; ++i) off += s[i].size();
  return off;
}

std::span<const double> ParamVector::layer_weights(std::size_t layer) const {
  const auto& s = shapes()[layer];
  return std::span<const double>(values_).subspan(layer_offset(layer), s.rows * s.cols);
}

std::span<double> ParamVector::layer_weights(std::size_t layer) {
  const auto& s = shapes()[layer];
  return std::span<double>(values_).subspan(layer_offset(layer), s.rows * s.cols);
}

std::span<const double> ParamVector::layer_bias(std::size_t layer) const {
  const auto& s = shapes()[layer];
  if (!s.has_bias) return {};
  return std::span<const double>(values_).subspan(layer_offset(layer) + s.rows * s.cols, s.rows);
}

std::span<double> ParamVector::layer_bias(std::size_t layer) {
  const auto& s = shapes()[layer];
  if (!s.has_bias) return {};
  return std::span<double>(values_).subspan(layer_offset(layer) + s.rows * s.cols, s.rows);
}

ParamVector& ParamVector::operator+=(const ParamVector& rhs) {
  check_same_shape(rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

ParamVector& ParamVector::operator-=(const ParamVector& rhs) {
  check_same_shape(rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

ParamVector& ParamVector::operator*=(double k) {
  for (auto& v : values_) v *= k;
  return *this;
}

ParamVector& ParamVector::axpy(double k, const ParamVector& rhs) {
  check_same_shape(rhs);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += k * rhs.values_[i];
  return *this;
}

bool ParamVector::operator==(const ParamVector& other) const {
  return same_shape(other) && values_ == other.values_;
}

double dot(const ParamVector& a, const ParamVector& b) {
  if (!a.same_shape(b)) throw ShapeError("dot: shape mismatch");
  const auto x = a.values();
  const auto y = b.values();
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double l2_norm(const ParamVector& v) { return l2_norm(v.values()); }

double component_std(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / n);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("cosine_similarity: length mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

}  // namespace frida::nn
