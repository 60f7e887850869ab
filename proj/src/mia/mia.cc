#include "frida/mia/mia.h"

#include <string>

#include "frida/common/errors.h"

namespace frida::mia {

const char* to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kCanaryLoss: return "canary_loss";
    case ScoreKind::kCosineMember: return "cosine_member";
    case ScoreKind::kCosineNonmember: return "cosine_nonmember";
  }
  return "unknown";
}

std::vector<double> ScoreMatrix::row(std::size_t client) const {
  const auto r = scores.row(static_cast<Eigen::Index>(client));
  return {r.data(), r.data() + r.size()};
}

std::vector<double> ScoreMatrix::row_sums() const {
  std::vector<double> out(num_clients());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scores.row(static_cast<Eigen::Index>(i)).sum();
  return out;
}

std::vector<ParamVector> per_sample_gradients(const nn::Architecture& arch,
                                              const ParamVector& global,
                                              const data::Dataset& samples) {
  const nn::DenseNet net(arch, global);
  std::vector<ParamVector> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const nn::Matrix x = samples.features.row(static_cast<Eigen::Index>(i));
    const int y = samples.labels[i];
    out.push_back(net.loss_and_grad(x, std::span<const int>(&y, 1)).grad);
  }
  return out;
}

CanaryGradients canary_gradients(const nn::Architecture& arch, const ParamVector& global,
                                 const data::Dataset& members, const data::Dataset& nonmembers) {
  return {per_sample_gradients(arch, global, members),
          per_sample_gradients(arch, global, nonmembers)};
}

ScoreMatrix loss_scores(const nn::Architecture& arch, const ParamVector& global,
                        std::span<const ParamVector> updates, const data::Dataset& canary,
                        std::size_t round) {
  ScoreMatrix sm;
  sm.round = round;
  sm.kind = ScoreKind::kCanaryLoss;
  sm.scores.resize(static_cast<Eigen::Index>(updates.size()),
                   static_cast<Eigen::Index>(canary.size()));
  for (std::size_t n = 0; n < updates.size(); ++n) {
    if (!updates[n].same_shape(global)) throw ShapeError("loss_scores: update shape mismatch");
    const nn::DenseNet local(arch, global + updates[n]);
    const auto losses = local.per_sample_loss(canary.features, canary.labels);
    for (std::size_t s = 0; s < losses.size(); ++s) {
      sm.scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s)) = losses[s];
    }
  }
  return sm;
}

std::vector<stats::ZVerdict> loss_decide(const ScoreMatrix& sm, double tau) {
  const auto sums = sm.row_sums();
  return stats::z_test(sums, tau, stats::Sidedness::kHigh);
}

CosineScores cosine_scores(std::span<const ParamVector> updates, const CanaryGradients& grads,
                           std::size_t round) {
  auto fill = [&](const std::vector<ParamVector>& sample_grads, ScoreKind kind) {
    ScoreMatrix sm;
    sm.round = round;
    sm.kind = kind;
    sm.scores.resize(static_cast<Eigen::Index>(updates.size()),
                     static_cast<Eigen::Index>(sample_grads.size()));
    for (std::size_t n = 0; n < updates.size(); ++n) {
      for (std::size_t s = 0; s < sample_grads.size(); ++s) {
        if (!updates[n].same_shape(sample_grads[s])) throw ShapeError("cosine_scores: shape mismatch");
        sm.scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s)) =
            nn::cosine_similarity(sample_grads[s].values(), updates[n].values());
      }
    }
    return sm;
  };
  CosineScores out{fill(grads.member, ScoreKind::kCosineMember),
                   fill(grads.nonmember, ScoreKind::kCosineNonmember), {}};
  for (std::size_t n = 0; n < updates.size(); ++n) {
    if (nn::l2_norm(updates[n]) == 0.0) out.degenerate_clients.push_back(n);
  }
  return out;
}

std::vector<stats::TVerdict> cosine_decide(const ScoreMatrix& member, const ScoreMatrix& nonmember,
                                           double alpha) {
  if (member.num_clients() != nonmember.num_clients()) {
    throw ShapeError("cosine_decide: member/non-member client counts differ");
  }
  std::vector<stats::TVerdict> out;
  out.reserve(member.num_clients());
  for (std::size_t n = 0; n < member.num_clients(); ++n) {
    out.push_back(stats::t_test(member.row(n), nonmember.row(n), alpha));
  }
  return out;
}

}  // namespace frida::mia
