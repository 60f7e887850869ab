#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace frida::nn {

// Shape of one dense layer: a rows x cols weight matrix (row-major in the
// flat vector), optionally followed by a rows-long bias.
struct LayerShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool has_bias = true;

  std::size_t size() const { return rows * cols + (has_bias ? rows : 0); }
  bool operator==(const LayerShape&) const = default;
};

using ShapeList = std::vector<LayerShape>;

std::size_t total_size(const ShapeList& shapes);

// Flat parameter (or gradient / update) vector with immutable per-layer
// shape metadata. All binary arithmetic requires identical shapes and throws
// ShapeError otherwise.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(ShapeList shapes);
  ParamVector(ShapeList shapes, std::vector<double> values);

  static ParamVector zeros_like(const ParamVector& other);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const ShapeList& shapes() const;
  std::size_t num_layers() const { return shapes().size(); }
  bool same_shape(const ParamVector& other) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // Offset of layer `layer` inside the flat vector.
  std::size_t layer_offset(std::size_t layer) const;
  std::span<const double> layer_weights(std::size_t layer) const;
  std::span<double> layer_weights(std::size_t layer);
  std::span<const double> layer_bias(std::size_t layer) const;
  std::span<double> layer_bias(std::size_t layer);

  ParamVector& operator+=(const ParamVector& rhs);
  ParamVector& operator-=(const ParamVector& rhs);
  ParamVector& operator*=(double k);
  // this += k * rhs
  ParamVector& axpy(double k, const ParamVector& rhs);

  friend ParamVector operator+(ParamVector lhs, const ParamVector& rhs) { return lhs += rhs; }
  friend ParamVector operator-(ParamVector lhs, const ParamVector& rhs) { return lhs -= rhs; }
  friend ParamVector operator*(ParamVector lhs, double k) { return lhs *= k; }
  friend ParamVector operator*(double k, ParamVector rhs) { return rhs *= k; }

  bool operator==(const ParamVector& other) const;

 private:
  void check_same_shape(const ParamVector& other) const;

  std::shared_ptr<const ShapeList> shapes_;
  std::vector<double> values_;
};

double dot(const ParamVector& a, const ParamVector& b);
double l2_norm(const ParamVector& v);
double l2_norm(std::span<const double> v);
// Population standard deviation of the components.
double component_std(std::span<const double> v);
// Cosine similarity; returns 0 when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace frida::nn
