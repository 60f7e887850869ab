#include "frida/mia/mia.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frida/common/errors.h"
#include "support/oracles.h"

namespace frida::mia {
namespace {

struct Fixture {
  nn::Architecture arch = nn::Architecture::mlp(4, {6}, 3);
  ParamVector global;
  data::Dataset canary;

  explicit Fixture(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    global = testing::random_params(arch.shapes(), rng, 0.5);
    canary = data::make_synthetic(3, 9, 4, seed);
  }
};

ScoreMatrix matrix_from(const std::vector<std::vector<double>>& rows, ScoreKind kind) {
  ScoreMatrix sm;
  sm.kind = kind;
  sm.scores.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      sm.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return sm;
}

TEST(LossScoresTest, ZeroUpdatesGiveIdenticalRows) {
  Fixture f(1);
  const std::vector<ParamVector> updates(4, ParamVector::zeros_like(f.global));
  const auto sm = loss_scores(f.arch, f.global, updates, f.canary, 3);
  EXPECT_EQ(sm.num_clients(), 4u);
  EXPECT_EQ(sm.num_samples(), 9u);
  EXPECT_EQ(sm.round, 3u);
  for (std::size_t n = 1; n < 4; ++n) EXPECT_EQ(sm.row(n), sm.row(0));
  for (const auto& v : loss_decide(sm, 1.0)) EXPECT_FALSE(v.flag);
}

// Each entry equals the batch-of-one loss of the reconstructed local model.
TEST(LossScoresTest, MatchesLossAndGradOnLocalModel) {
  Fixture f(2);
  std::mt19937_64 rng(5);
  std::vector<ParamVector> updates;
  for (int n = 0; n < 3; ++n) updates.push_back(testing::random_params(f.arch.shapes(), rng, 0.1));
  const auto sm = loss_scores(f.arch, f.global, updates, f.canary);
  for (std::size_t n = 0; n < updates.size(); ++n) {
    const nn::DenseNet local(f.arch, f.global + updates[n]);
    double mean = 0.0;
    for (std::size_t s = 0; s < f.canary.size(); ++s) {
      const nn::Matrix x = f.canary.features.row(static_cast<Eigen::Index>(s));
      const int y = f.canary.labels[s];
      const double want = local.loss_and_grad(x, std::span<const int>(&y, 1)).loss;
      EXPECT_NEAR(sm.scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s)), want,
                  1e-13);
      mean += want;
    }
    mean /= static_cast<double>(f.canary.size());
    EXPECT_NEAR(mean, local.loss_and_grad(f.canary.features, f.canary.labels).loss, 1e-12);
  }
}

TEST(LossScoresTest, ShapeMismatchThrows) {
  Fixture f(3);
  const std::vector<ParamVector> updates = {ParamVector({{2, 2, true}})};
  EXPECT_THROW(loss_scores(f.arch, f.global, updates, f.canary), ShapeError);
}

TEST(LossDecideTest, FlagsOnlyTheHighOutlier) {
  // Single-column matrix: the row sums are the scores themselves.
  const auto sm = matrix_from({{2.0}, {2.1}, {1.9}, {6.0}}, ScoreKind::kCanaryLoss);
  const auto v = loss_decide(sm, 1.0);
  EXPECT_EQ(std::vector<bool>({v[0].flag, v[1].flag, v[2].flag, v[3].flag}),
            std::vector<bool>({false, false, false, true}));
}

TEST(LossDecideTest, AllEqualRowsHaveNoFlags) {
  const auto sm = matrix_from({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}, ScoreKind::kCanaryLoss);
  for (const auto& v : loss_decide(sm, 0.1)) EXPECT_FALSE(v.flag);
}

// Adding a constant to every entry shifts all row sums equally.
TEST(LossDecideTest, ShiftInvariance) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(2.0, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    ScoreMatrix sm;
    sm.scores.resize(6, 5);
    for (Eigen::Index i = 0; i < sm.scores.size(); ++i) sm.scores.data()[i] = normal(rng);
    ScoreMatrix shifted = sm;
    shifted.scores.array() += 3.25;
    const auto a = loss_decide(sm, 1.0);
    const auto b = loss_decide(shifted, 1.0);
    for (std::size_t n = 0; n < a.size(); ++n) {
      if (std::abs(a[n].z - 1.0) > 1e-9) EXPECT_EQ(a[n].flag, b[n].flag);
    }
  }
}

// Honest-only cohorts with i.i.d. Gaussian row sums: the flag rate approaches
// the one-sided normal tail P(Z > 1) for a large cohort.
TEST(LossDecideTest, HonestFlagRateMatchesNormalTail) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(5.0, 1.0);
  std::size_t flags = 0, total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ScoreMatrix sm;
    sm.scores.resize(200, 1);
    for (Eigen::Index i = 0; i < 200; ++i) sm.scores(i, 0) = normal(rng);
    for (const auto& v : loss_decide(sm, 1.0)) flags += v.flag;
    total += 200;
  }
  const double rate = static_cast<double>(flags) / static_cast<double>(total);
  const double tail = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
  std::printf("honest flag rate %.4f vs tail %.4f\n", rate, tail);
  EXPECT_NEAR(rate, tail, 0.01);
}

ParamVector flat(std::vector<double> v) {
  const std::size_t n = v.size();
  return ParamVector({{1, n, false}}, std::move(v));
}

TEST(CosineScoresTest, ClosedFormCases) {
  CanaryGradients g;
  g.member = {flat({1, 1, 0}), flat({0, 0, 5}), flat({2, 0, 0})};
  g.nonmember = {flat({1, 0, 0}), flat({0, 1, 0}), flat({0, 0, 0})};
  const std::vector<ParamVector> updates = {flat({1, 0, 0}), flat({0, 0, 0})};
  const auto cs = cosine_scores(updates, g, 2);
  EXPECT_NEAR(cs.member.scores(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(cs.member.scores(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(cs.member.scores(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(cs.nonmember.scores(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(cs.nonmember.scores(0, 2), 0.0);
  EXPECT_EQ(cs.member.kind, ScoreKind::kCosineMember);
  EXPECT_EQ(cs.nonmember.kind, ScoreKind::kCosineNonmember);
  EXPECT_EQ(cs.degenerate_clients, std::vector<std::size_t>{1});
  for (Eigen::Index s = 0; s < 3; ++s) EXPECT_EQ(cs.member.scores(1, s), 0.0);
}

TEST(CosineScoresTest, ScalingAnUpdateKeepsItsRow) {
  Fixture f(6);
  const auto grads = canary_gradients(f.arch, f.global, f.canary, data::make_synthetic(3, 9, 4, 60));
  ASSERT_EQ(grads.member.size(), 9u);
  std::mt19937_64 rng(8);
  std::vector<ParamVector> updates = {testing::random_params(f.arch.shapes(), rng),
                                      testing::random_params(f.arch.shapes(), rng)};
  const auto base = cosine_scores(updates, grads);
  for (double k : {1e-4, 0.3, 7.0, 1e5}) {
    std::vector<ParamVector> scaled = updates;
    scaled[1] *= k;
    const auto cs = cosine_scores(scaled, grads);
    for (std::size_t s = 0; s < 9; ++s) {
      const auto idx = static_cast<Eigen::Index>(s);
      EXPECT_NEAR(cs.member.scores(1, idx), base.member.scores(1, idx), 1e-12);
      EXPECT_NEAR(cs.nonmember.scores(1, idx), base.nonmember.scores(1, idx), 1e-12);
    }
  }
}

TEST(CosineDecideTest, IdenticalRowsAreFlagged) {
  const auto m = matrix_from({{0.1, 0.2, 0.3}, {0.5, 0.5, 0.5}}, ScoreKind::kCosineMember);
  const auto v = cosine_decide(m, m, 0.05);
  EXPECT_TRUE(v[0].flag);
  EXPECT_DOUBLE_EQ(v[0].p_value, 1.0);
  EXPECT_TRUE(v[1].flag);
}

TEST(CosineDecideTest, LargeShiftIsNotFlagged) {
  // Rows share spread 1 (pooled std 1); member mean sits 10 above.
  const std::vector<double> non = {-1.0, 0.0, 1.0, -1.0, 0.0, 1.0};
  std::vector<double> mem = non;
  for (auto& x : mem) x += 10.0;
  const auto v = cosine_decide(matrix_from({mem}, ScoreKind::kCosineMember),
                               matrix_from({non}, ScoreKind::kCosineNonmember), 0.05);
  // pooled var = 8/10, se = sqrt(0.8 * (1/6 + 1/6))
  EXPECT_NEAR(v[0].t, 10.0 / std::sqrt(0.8 / 3.0), 1e-12);
  EXPECT_FALSE(v[0].flag);
}

// A client's verdict uses only its own two rows.
TEST(CosineDecideTest, ClientsAreIndependent) {
  const std::vector<double> mem = {0.4, 0.5, 0.45, 0.52};
  const std::vector<double> non = {0.1, 0.05, 0.12, 0.0};
  const auto alone = cosine_decide(matrix_from({mem}, ScoreKind::kCosineMember),
                                   matrix_from({non}, ScoreKind::kCosineNonmember), 0.05);
  const std::vector<double> fr = {0.01, 0.02, 0.0, 0.015};
  const auto crowd = cosine_decide(matrix_from({fr, mem, fr, fr}, ScoreKind::kCosineMember),
                                   matrix_from({fr, non, fr, fr}, ScoreKind::kCosineNonmember), 0.05);
  EXPECT_EQ(crowd[1].flag, alone[0].flag);
  EXPECT_DOUBLE_EQ(crowd[1].p_value, alone[0].p_value);
  EXPECT_TRUE(crowd[0].flag);
}

TEST(CosineDecideTest, MismatchedMatricesThrow) {
  const auto a = matrix_from({{1, 2}, {3, 4}}, ScoreKind::kCosineMember);
  const auto b = matrix_from({{1, 2}}, ScoreKind::kCosineNonmember);
  EXPECT_THROW(cosine_decide(a, b, 0.05), ShapeError);
}

}  // namespace
}  // namespace frida::mia
