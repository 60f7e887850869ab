#include "frida/pia/label_inference.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "frida/common/errors.h"

namespace frida::pia {

LabelDistribution LabelDistribution::uniform(std::size_t num_labels) {
  if (num_labels == 0) throw InvalidInput("LabelDistribution: zero labels");
  return {std::vector<double>(num_labels, 1.0 / static_cast<double>(num_labels))};
}

LabelDistribution LabelDistribution::from_weights(const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw InvalidInput("LabelDistribution: bad weight");
    sum += w;
  }
  if (!(sum > 0.0)) return uniform(weights.size());
  LabelDistribution d{weights};
  for (auto& p : d.probs) p /= sum;
  return d;
}

std::size_t LabelDistribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

bool LabelDistribution::is_valid(double tol) const {
  if (probs.empty()) return false;
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

LabelDistribution mean_distribution(const std::vector<LabelDistribution>& dists) {
  if (dists.empty()) throw InvalidInput("mean_distribution: no distributions");
  LabelDistribution out{std::vector<double>(dists.front().size(), 0.0)};
  for (const auto& d : dists) {
    if (d.size() != out.size()) throw ShapeError("mean_distribution: label counts differ");
    for (std::size_t j = 0; j < d.size(); ++j) out.probs[j] += d.probs[j];
  }
  for (auto& p : out.probs) p /= static_cast<double>(dists.size());
  return out;
}

double update_gain(const TrainingProtocol& protocol, std::size_t n_samples) {
  if (n_samples == 0) throw InvalidInput("update_gain: n_samples must be >= 1");
  const std::size_t batch = std::max<std::size_t>(1, protocol.batch_size);
  const std::size_t local_steps = protocol.local_epochs * ((n_samples + batch - 1) / batch);
  const std::size_t total_steps = local_steps + protocol.canary_epochs;
  const double mu = protocol.momentum;
  double weight_sum = 0.0;
  for (std::size_t k = 1; k <= local_steps; ++k) {
    // Accumulated contribution of step k's gradient through the velocity up
    // to the end of the round.
    const double remaining = static_cast<double>(total_steps - k + 1);
    weight_sum += mu == 0.0 ? 1.0 : (1.0 - std::pow(mu, remaining)) / (1.0 - mu);
  }
  return protocol.learning_rate * weight_sum / static_cast<double>(n_samples);
}

std::vector<double> last_layer_row_sums(const ParamVector& v) {
  if (v.num_layers() == 0) throw ShapeError("last_layer_row_sums: empty parameter vector");
  const std::size_t layer = v.num_layers() - 1;
  const auto& s = v.shapes()[layer];
  const auto w = v.layer_weights(layer);
  const auto b = v.layer_bias(layer);
  std::vector<double> out(s.rows, 0.0);
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) out[r] += w[r * s.cols + c];
    if (!b.empty()) out[r] += b[r];
  }
  return out;
}

std::vector<double> last_layer(const ParamVector& v) {
  if (v.num_layers() == 0) throw ShapeError("last_layer: empty parameter vector");
  const std::size_t layer = v.num_layers() - 1;
  const auto w = v.layer_weights(layer);
  const auto b = v.layer_bias(layer);
  std::vector<double> out(w.begin(), w.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

namespace {

// Full-batch gradient over the auxiliary samples carrying `label`.
ParamVector label_gradient(const nn::DenseNet& net, const data::Dataset& aux, int label) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < aux.size(); ++i) {
    if (aux.labels[i] == label) idx.push_back(i);
  }
  if (idx.empty()) throw InvalidInput("auxiliary data has no sample of label " + std::to_string(label));
  const data::Dataset sub = aux.subset(idx);
  return net.loss_and_grad(sub.features, sub.labels).grad;
}

}  // namespace

LabelImpactModel LabelImpactModel::estimate(const nn::Architecture& arch, const ParamVector& global,
                                            const data::Dataset& aux, TrainingProtocol protocol) {
  const nn::DenseNet net(arch, global);
  std::vector<std::vector<double>> impacts;
  for (int y = 0; y < static_cast<int>(arch.num_labels()); ++y) {
    auto sums = last_layer_row_sums(label_gradient(net, aux, y));
    for (auto& s : sums) s = -s;  // descent direction
    impacts.push_back(std::move(sums));
  }
  return LabelImpactModel(std::move(impacts), protocol);
}

LabelDistribution pia_wainakh(const ParamVector& update, const ParamVector& global,
                              std::size_t n_samples, const LabelImpactModel& impacts) {
  if (!update.same_shape(global)) throw ShapeError("pia_wainakh: update/global shape mismatch");
  if (n_samples == 0) throw InvalidInput("pia_wainakh: n_samples must be >= 1");
  const std::size_t l = impacts.num_labels();
  const auto tail = last_layer(update);
  if (std::all_of(tail.begin(), tail.end(), [](double x) { return x == 0.0; })) {
    return LabelDistribution::uniform(l);
  }
  std::vector<double> presence = last_layer_row_sums(update);
  if (presence.size() != l) throw ShapeError("pia_wainakh: label count mismatch");
  const double gain = update_gain(impacts.protocol(), n_samples);

  std::vector<double> counts(l, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t j = static_cast<std::size_t>(
        std::max_element(presence.begin(), presence.end()) - presence.begin());
    counts[j] += 1.0;
    const auto& imp = impacts.impact(j);
    for (std::size_t k = 0; k < l; ++k) presence[k] -= gain * imp[k];
  }
  return LabelDistribution::from_weights(counts);
}

LabelBasis LabelBasis::estimate(const nn::Architecture& arch, const ParamVector& global,
                                const data::Dataset& aux) {
  const nn::DenseNet net(arch, global);
  std::vector<std::vector<double>> basis;
  for (int y = 0; y < static_cast<int>(arch.num_labels()); ++y) {
    auto v = last_layer(label_gradient(net, aux, y));
    for (auto& x : v) x = -x;
    basis.push_back(std::move(v));
  }
  return LabelBasis(std::move(basis));
}

std::vector<double> LabelBasis::unified(const std::vector<std::size_t>& labels) const {
  if (labels.empty()) throw InvalidInput("LabelBasis::unified: no labels");
  std::vector<double> out(basis_.front().size(), 0.0);
  for (auto y : labels) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += basis_[y][i];
  }
  for (auto& x : out) x /= static_cast<double>(labels.size());
  return out;
}

NnlsResult nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& b,
                std::size_t max_iter, double tol) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  const auto m = static_cast<Eigen::Index>(b.size());
  NnlsResult res;
  res.x.assign(columns.size(), 0.0);
  if (k == 0) {
    res.residual_norm = Eigen::Map<const Eigen::VectorXd>(b.data(), m).norm();
    return res;
  }
  Eigen::MatrixXd a(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (static_cast<Eigen::Index>(columns[j].size()) != m) throw ShapeError("nnls: column length mismatch");
    a.col(j) = Eigen::Map<const Eigen::VectorXd>(columns[j].data(), m);
  }
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), m);
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * rhs;
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  if (lmax > 0.0) {
    const double step = 1.0 / lmax;
    for (std::size_t it = 0; it < max_iter; ++it) {
      const Eigen::VectorXd next = (x - step * (gram * x - atb)).cwiseMax(0.0);
      const double change = (next - x).norm();
      x = next;
      res.iterations = it + 1;
      if (change <= tol * std::max(1.0, x.norm())) break;
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) res.x[static_cast<std::size_t>(j)] = x(j);
  res.residual_norm = (a * x - rhs).norm();
  return res;
}

std::vector<bool> dai_null_classes(const ParamVector& update) {
  if (update.num_layers() == 0) throw ShapeError("dai_null_classes: empty update");
  const auto bias = update.layer_bias(update.num_layers() - 1);
  std::vector<bool> null(bias.size());
  for (std::size_t j = 0; j < bias.size(); ++j) null[j] = bias[j] <= 0.0;
  return null;
}

DaiResult pia_dai_detailed(const ParamVector& update, const ParamVector& global,
                           std::size_t n_samples, const LabelBasis& basis) {
  if (!update.same_shape(global)) throw ShapeError("pia_dai: update/global shape mismatch");
  if (n_samples == 0) throw InvalidInput("pia_dai: n_samples must be >= 1");
  const std::size_t l = basis.num_labels();
  DaiResult out;
  out.null_class = dai_null_classes(update);
  if (out.null_class.size() != l) throw ShapeError("pia_dai: label count mismatch");

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < l; ++j) {
    if (!out.null_class[j]) active.push_back(j);
  }
  if (active.empty()) {
    out.all_null = true;
    out.dist = LabelDistribution::uniform(l);
    return out;
  }

  std::vector<std::vector<double>> columns;
  for (auto j : active) columns.push_back(basis.basis(j));
  columns.push_back(basis.unified(active));
  const auto fit = nnls(columns, last_layer(update));

  std::vector<double> weights(l, 0.0);
  const double shared = fit.x.back() / static_cast<double>(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) weights[active[i]] = fit.x[i] + shared;
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) {
    for (auto j : active) weights[j] = 1.0;
  }
  out.dist = LabelDistribution::from_weights(weights);
  return out;
}

LabelDistribution pia_dai(const ParamVector& update, const ParamVector& global,
                          std::size_t n_samples, const LabelBasis& basis) {
  return pia_dai_detailed(update, global, n_samples, basis).dist;
}

LabelDistribution pia_dai(const ParamVector& update, const ParamVector& global,
                          std::size_t n_samples, const nn::Architecture& arch,
                          const data::Dataset& aux) {
  return pia_dai(update, global, n_samples, LabelBasis::estimate(arch, global, aux));
}

}  // namespace frida::pia
