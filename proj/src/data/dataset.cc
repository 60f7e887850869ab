#include "frida/data/dataset.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "frida/common/errors.h"

namespace frida::data {

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InvalidInput("Dataset: feature rows and labels differ");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_labels) throw InvalidInput("Dataset: label out of range");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.num_labels = num_labels;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= size()) throw InvalidInput("Dataset::subset: index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(indices[i]));
    out.labels.push_back(labels[indices[i]]);
  }
  return out;
}

std::vector<std::size_t> Dataset::label_histogram() const {
  std::vector<std::size_t> h(static_cast<std::size_t>(num_labels), 0);
  for (int y : labels) ++h[static_cast<std::size_t>(y)];
  return h;
}

std::vector<double> Dataset::label_frequencies() const {
  const auto h = label_histogram();
  std::vector<double> f(h.size(), 0.0);
  if (empty()) return f;
  for (std::size_t i = 0; i < h.size(); ++i) f[i] = static_cast<double>(h[i]) / static_cast<double>(size());
  return f;
}

Dataset Dataset::concat(const Dataset& a, const Dataset& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.input_dim() != b.input_dim() || a.num_labels != b.num_labels) {
    throw ShapeError("Dataset::concat: incompatible datasets");
  }
  Dataset out;
  out.num_labels = a.num_labels;
  out.features.resize(a.features.rows() + b.features.rows(), a.features.cols());
  out.features << a.features, b.features;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

Standardizer Standardizer::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Eigen::RowVectorXd::Zero(d), Eigen::RowVectorXd::Ones(d)};
}

void Standardizer::apply(Matrix& features) const {
  if (features.cols() != mean.size()) throw ShapeError("Standardizer: width mismatch");
  features.rowwise() -= mean;
  features.array().rowwise() /= scale.array();
}

BlobTask::BlobTask(int num_labels, std::size_t input_dim, std::uint64_t seed, BlobOptions options)
    : num_labels_(num_labels), options_(options) {
  if (num_labels < 2) throw InvalidInput("BlobTask: need at least 2 labels");
  if (input_dim < 2) throw InvalidInput("BlobTask: need input_dim >= 2");
  if (!(options.spread > 0.0)) throw InvalidInput("BlobTask: spread must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, options.separation);
  const auto l = static_cast<Eigen::Index>(num_labels);
  const auto d = static_cast<Eigen::Index>(input_dim);
  means_.resize(l, d);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) means_(i, j) = normal(rng);
  }
  // Mixture moments: mean of class means; variance = spread^2 + variance of
  // the class means around their average.
  standardizer_.mean = means_.colwise().mean();
  standardizer_.scale.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double v = (means_.col(j).array() - standardizer_.mean(j)).square().mean();
    standardizer_.scale(j) = std::sqrt(options.spread * options.spread + v);
  }
}

Dataset BlobTask::sample(std::size_t n, Rng& rng) const {
  Dataset ds;
  ds.num_labels = num_labels_;
  ds.features.resize(static_cast<Eigen::Index>(n), means_.cols());
  ds.labels.resize(n);
  std::normal_distribution<double> normal(0.0, options_.spread);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % static_cast<std::size_t>(num_labels_));
    ds.labels[i] = y;
    for (Eigen::Index j = 0; j < means_.cols(); ++j) {
      ds.features(static_cast<Eigen::Index>(i), j) = means_(y, j) + normal(rng);
    }
  }
  standardizer_.apply(ds.features);
  return ds;
}

Dataset make_synthetic(int num_labels, std::size_t n_samples, std::size_t input_dim,
                       std::uint64_t seed, BlobOptions options) {
  if (num_labels >= 2 && n_samples < static_cast<std::size_t>(num_labels)) {
    throw InvalidInput("make_synthetic: fewer samples than labels");
  }
  const BlobTask task(num_labels, input_dim, derive_seed(seed, Stream::kTask), options);
  Rng rng(derive_seed(seed, Stream::kClientData));
  return task.sample(n_samples, rng);
}

Dataset make_auxiliary(int num_labels, std::size_t per_label, std::size_t input_dim,
                       std::uint64_t seed, const Standardizer* standardizer) {
  if (per_label < 1) throw InvalidInput("make_auxiliary: per_label must be >= 1");
  if (num_labels < 1) throw InvalidInput("make_auxiliary: need at least one label");
  Dataset ds;
  ds.num_labels = num_labels;
  const std::size_t n = per_label * static_cast<std::size_t>(num_labels);
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(input_dim));
  ds.labels.resize(n);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = static_cast<int>(i / per_label);
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      ds.features(static_cast<Eigen::Index>(i), j) = normal(rng);
    }
  }
  if (standardizer != nullptr) standardizer->apply(ds.features);
  return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_csv: cannot open " + path.string());
  for (std::size_t j = 0; j < ds.input_dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.input_dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out << buf << ',';
    }
    out << ds.labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("save_csv: write failed for " + path.string());
}

Dataset load_csv(const std::filesystem::path& path, int num_labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("load_csv: missing header in " + path.string());
  std::size_t cols = 0;
  {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> names;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
    if (names.empty() || names.back() != "label") {
      throw InvalidInput("load_csv: last header column must be 'label'");
    }
    cols = names.size() - 1;
  }
  std::vector<double> feats;
  Labels labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k < cols) {
        feats.push_back(std::stod(cell));
      } else {
        labels.push_back(std::stoi(cell));
      }
      ++k;
    }
    if (k != cols + 1) throw InvalidInput("load_csv: ragged row in " + path.string());
  }
  Dataset ds;
  ds.features = Eigen::Map<Matrix>(feats.data(), static_cast<Eigen::Index>(labels.size()),
                                   static_cast<Eigen::Index>(cols));
  ds.labels = std::move(labels);
  int max_label = -1;
  for (int y : ds.labels) max_label = std::max(max_label, y);
  ds.num_labels = num_labels > 0 ? num_labels : max_label + 1;
  ds.validate();
  return ds;
}

}  // namespace frida::data
