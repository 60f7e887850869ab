#pragma once

#include <cstddef>
#include <vector>

#include "frida/data/dataset.h"
#include "frida/nn/dense_net.h"

namespace frida::pia {

using nn::ParamVector;

// Normalized per-label frequencies: non-negative, summing to one.
struct LabelDistribution {
  std::vector<double> probs;

  static LabelDistribution uniform(std::size_t num_labels);
  // Normalizes non-negative weights; all-zero weights give the uniform
  // distribution.
  static LabelDistribution from_weights(const std::vector<double>& weights);

  std::size_t size() const { return probs.size(); }
  std::size_t argmax() const;
  bool is_valid(double tol = 1e-9) const;
};

// Client-mean of inferred distributions.
LabelDistribution mean_distribution(const std::vector<LabelDistribution>& dists);

// Local-training protocol the server assumes when translating a model update
// back into per-sample gradient mass.
struct TrainingProtocol {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  std::size_t local_epochs = 1;
  std::size_t canary_epochs = 0;
};

// Average factor k such that a client with n samples produces an update of
// roughly -k * sum_s grad_s: learning rate times the momentum-accumulated
// step weights of its local steps, divided by n.
double update_gain(const TrainingProtocol& protocol, std::size_t n_samples);

// Per-label sum of the last layer's weight row plus its bias.
std::vector<double> last_layer_row_sums(const ParamVector& v);
// Last layer (weights then bias) as a flat copy.
std::vector<double> last_layer(const ParamVector& v);

// Row-sum presence that one sample of each label adds to an update, taken
// from one full-batch gradient per label on auxiliary data at M^{t-1}.
class LabelImpactModel {
 public:
  static LabelImpactModel estimate(const nn::Architecture& arch, const ParamVector& global,
                                   const data::Dataset& aux, TrainingProtocol protocol);

  std::size_t num_labels() const { return impacts_.size(); }
  // impact(j)[k]: change of row k's presence per descent step on one label-j
  // sample (positive on k == j for a sensible model).
  const std::vector<double>& impact(std::size_t label) const { return impacts_[label]; }
  const TrainingProtocol& protocol() const { return protocol_; }

  LabelImpactModel(std::vector<std::vector<double>> impacts, TrainingProtocol protocol)
      : impacts_(std::move(impacts)), protocol_(protocol) {}

 private:
  std::vector<std::vector<double>> impacts_;
  TrainingProtocol protocol_;
};

// Iterative label extraction: repeatedly take the label with the highest
// remaining presence, count it and subtract its impact, until n_samples
// labels are counted. A zero last-layer update yields the uniform
// distribution.
LabelDistribution pia_wainakh(const ParamVector& update, const ParamVector& global,
                              std::size_t n_samples, const LabelImpactModel& impacts);

// Per-label basis updates (descent direction after training on one label of
// auxiliary data), last layer only.
class LabelBasis {
 public:
  static LabelBasis estimate(const nn::Architecture& arch, const ParamVector& global,
                             const data::Dataset& aux);

  explicit LabelBasis(std::vector<std::vector<double>> basis) : basis_(std::move(basis)) {}

  std::size_t num_labels() const { return basis_.size(); }
  const std::vector<double>& basis(std::size_t label) const { return basis_[label]; }
  // Equal-weight mix of the listed labels' bases.
  std::vector<double> unified(const std::vector<std::size_t>& labels) const;

 private:
  std::vector<std::vector<double>> basis_;
};

struct NnlsResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
};

// min ||A x - b||^2 subject to x >= 0, A given column-wise. Projected
// gradient descent with step 1 / lambda_max(A^T A).
NnlsResult nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& b,
                std::size_t max_iter = 500, double tol = 1e-10);

// Labels whose bias update is <= 0 (no positive change) are null.
std::vector<bool> dai_null_classes(const ParamVector& update);

struct DaiResult {
  LabelDistribution dist;
  std::vector<bool> null_class;
  bool all_null = false;
};

DaiResult pia_dai_detailed(const ParamVector& update, const ParamVector& global,
                           std::size_t n_samples, const LabelBasis& basis);
LabelDistribution pia_dai(const ParamVector& update, const ParamVector& global,
                          std::size_t n_samples, const LabelBasis& basis);
LabelDistribution pia_dai(const ParamVector& update, const ParamVector& global,
                          std::size_t n_samples, const nn::Architecture& arch,
                          const data::Dataset& aux);

}  // namespace frida::pia
