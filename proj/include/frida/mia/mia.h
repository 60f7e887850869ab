#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frida/data/dataset.h"
#include "frida/nn/dense_net.h"
#include "frida/stats/decision.h"

namespace frida::mia {

using nn::ParamVector;

enum class ScoreKind { kCanaryLoss, kCosineMember, kCosineNonmember };

const char* to_string(ScoreKind kind);

// Clients x canary-samples score matrix for one round.
struct ScoreMatrix {
  std::size_t round = 0;
  ScoreKind kind = ScoreKind::kCanaryLoss;
  nn::Matrix scores;

  std::size_t num_clients() const { return static_cast<std::size_t>(scores.rows()); }
  std::size_t num_samples() const { return static_cast<std::size_t>(scores.cols()); }
  std::vector<double> row(std::size_t client) const;
  std::vector<double> row_sums() const;
};

// Per-sample gradients at the broadcast model M^{t-1}, for the round's
// canary window (members) and an equally sized complement (non-members).
struct CanaryGradients {
  std::vector<ParamVector> member;
  std::vector<ParamVector> nonmember;
};

// Gradient of each sample's own loss (batch of one) at `global`.
std::vector<ParamVector> per_sample_gradients(const nn::Architecture& arch,
                                              const ParamVector& global,
                                              const data::Dataset& samples);
CanaryGradients canary_gradients(const nn::Architecture& arch, const ParamVector& global,
                                 const data::Dataset& members, const data::Dataset& nonmembers);

// Entry (n, s) = cross-entropy of canary s under M^{t-1} + G_n^t.
ScoreMatrix loss_scores(const nn::Architecture& arch, const ParamVector& global,
                        std::span<const ParamVector> updates, const data::Dataset& canary,
                        std::size_t round = 0);

// Row sums of the loss matrix, flagged by a one-sided (high) z-test.
std::vector<stats::ZVerdict> loss_decide(const ScoreMatrix& sm, double tau);

struct CosineScores {
  ScoreMatrix member;
  ScoreMatrix nonmember;
  // Clients whose update had zero norm (scores forced to 0).
  std::vector<std::size_t> degenerate_clients;
};

// CosSim(canary gradient, client update) for every client and sample.
CosineScores cosine_scores(std::span<const ParamVector> updates, const CanaryGradients& grads,
                           std::size_t round = 0);

// Per-client pooled two-sample t-test between member and non-member rows;
// flagged when p >= alpha (no evidence of canary training).
std::vector<stats::TVerdict> cosine_decide(const ScoreMatrix& member, const ScoreMatrix& nonmember,
                                           double alpha);

}  // namespace frida::mia
