#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "frida/common/rng.h"
#include "frida/nn/dense_net.h"

namespace frida::data {

using nn::Labels;
using nn::Matrix;

struct Dataset {
  Matrix features;  // one row per sample
  Labels labels;
  int num_labels = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t input_dim() const { return static_cast<std::size_t>(features.cols()); }
  bool empty() const { return labels.empty(); }

  // Throws InvalidInput when rows/labels disagree or a label is out of range.
  void validate() const;
  Dataset subset(std::span<const std::size_t> indices) const;
  std::vector<std::size_t> label_histogram() const;
  // Histogram normalized to sum 1 (all zeros for an empty dataset).
  std::vector<double> label_frequencies() const;
  // Row-concatenation; both sides must agree on input_dim and num_labels.
  static Dataset concat(const Dataset& a, const Dataset& b);
};

// Per-feature affine standardization x -> (x - mean) / scale.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer identity(std::size_t dim);
  void apply(Matrix& features) const;
};

struct BlobOptions {
  // Class means are drawn i.i.d. N(0, separation^2) per coordinate.
  double separation = 1.0;
  // Isotropic within-class standard deviation.
  double spread = 1.0;
};

// Gaussian-blob classification task: one mean per label, fixed spread. The
// standardizer is the population per-feature standardization of the
// balanced mixture, so every split drawn from the task shares it.
class BlobTask {
 public:
  BlobTask(int num_labels, std::size_t input_dim, std::uint64_t seed, BlobOptions options = {});

  int num_labels() const { return num_labels_; }
  std::size_t input_dim() const { return static_cast<std::size_t>(means_.cols()); }
  const Matrix& means() const { return means_; }
  const Standardizer& standardizer() const { return standardizer_; }

  // n samples, labels cycling 0..l-1 so label counts differ by at most one.
  Dataset sample(std::size_t n, Rng& rng) const;

 private:
  int num_labels_;
  BlobOptions options_;
  Matrix means_;  // num_labels x input_dim, raw (unstandardized) space
  Standardizer standardizer_;
};

// Standalone synthetic dataset (task and samples from one seed).
Dataset make_synthetic(int num_labels, std::size_t n_samples, std::size_t input_dim,
                       std::uint64_t seed, BlobOptions options = {});

// Server-side auxiliary set: per_label samples of each label whose features
// are standard Gaussian noise passed through the training standardization.
Dataset make_auxiliary(int num_labels, std::size_t per_label, std::size_t input_dim,
                       std::uint64_t seed, const Standardizer* standardizer = nullptr);

// CSV with header f0,...,f{d-1},label.
void save_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset load_csv(const std::filesystem::path& path, int num_labels = 0);

}  // namespace frida::data
