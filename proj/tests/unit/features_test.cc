#include "frida/baseline/features.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frida/common/errors.h"
#include "support/oracles.h"

namespace frida::baseline {
namespace {

ParamVector flat(std::vector<double> v) {
  const std::size_t n = v.size();
  return ParamVector({{1, n, false}}, std::move(v));
}

TEST(L2FeatureTest, ClosedForms) {
  const std::vector<ParamVector> u = {flat({0, 0}), flat({3, 4})};
  const auto f = l2_feature(u);
  EXPECT_EQ(f.feature, Feature::kL2);
  EXPECT_EQ(f.scores, (std::vector<double>{0.0, 5.0}));
  EXPECT_THROW(l2_feature(std::span<const ParamVector>{}), InvalidInput);
}

// Reverse-order Kahan accumulation as an independent route to the norm.
TEST(L2FeatureTest, MatchesReorderedSummation) {
  std::mt19937_64 rng(2);
  std::vector<ParamVector> u;
  for (int i = 0; i < 5; ++i) u.push_back(testing::random_params({{40, 30, true}}, rng));
  const auto f = l2_feature(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double sum = 0.0, comp = 0.0;
    const auto v = u[i].values();
    for (std::size_t k = v.size(); k-- > 0;) {
      const double y = v[k] * v[k] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    EXPECT_NEAR(f.scores[i], std::sqrt(sum), 1e-12 * std::sqrt(sum));
  }
}

TEST(StdFeatureTest, ClosedForms) {
  const std::vector<ParamVector> u = {flat({2, 2, 2}), flat({0, 2})};
  EXPECT_EQ(std_feature(u).scores, (std::vector<double>{0.0, 1.0}));
  const std::vector<ParamVector> tiny = {flat({1})};
  EXPECT_THROW(std_feature(tiny), InvalidInput);
}

// One-pass (sum and sum of squares) formula against the two-pass result.
TEST(StdFeatureTest, MatchesOnePassFormula) {
  std::mt19937_64 rng(3);
  std::vector<ParamVector> u;
  for (int i = 0; i < 5; ++i) u.push_back(testing::random_params({{20, 10, true}}, rng, 0.3));
  const auto f = std_feature(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double s = 0.0, ss = 0.0;
    for (double x : u[i].values()) {
      s += x;
      ss += x * x;
    }
    const double n = static_cast<double>(u[i].size());
    EXPECT_NEAR(f.scores[i], std::sqrt(ss / n - (s / n) * (s / n)), 1e-12);
  }
}

TEST(CosimFeatureTest, IdenticalUpdatesScoreOne) {
  const std::vector<ParamVector> u(4, flat({1, -2, 3}));
  Rng rng(1);
  for (double s : cosim_feature(u, rng).scores) EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(CosimFeatureTest, NeverSelfReferenced) {
  std::mt19937_64 gen(4);
  std::vector<ParamVector> u;
  for (int i = 0; i < 5; ++i) u.push_back(testing::random_params({{1, 6, false}}, gen));
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto f = cosim_feature(u, rng);
    ASSERT_LT(f.reference_client, 5u);
    EXPECT_NE(f.self_reference_substitute, f.reference_client);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t ref = i == f.reference_client ? f.self_reference_substitute
                                                      : f.reference_client;
      EXPECT_NE(ref, i);
      EXPECT_DOUBLE_EQ(f.scores[i], nn::cosine_similarity(u[i].values(), u[ref].values()));
    }
  }
}

TEST(CosimFeatureTest, ReferenceIsUniformAndSeeded) {
  const std::vector<ParamVector> u(4, flat({1, 2}));
  std::vector<int> hits(4, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    Rng a(seed), b(seed);
    const auto fa = cosim_feature(u, a);
    EXPECT_EQ(fa.reference_client, cosim_feature(u, b).reference_client);
    ++hits[fa.reference_client];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 120);
}

TEST(CosimFeatureTest, ZeroNormScoresZero) {
  const std::vector<ParamVector> u = {flat({0, 0}), flat({1, 0}), flat({0, 1})};
  Rng rng(2);
  EXPECT_EQ(cosim_feature(u, rng).scores[0], 0.0);
  const std::vector<ParamVector> one = {flat({1, 0})};
  EXPECT_THROW(cosim_feature(one, rng), InvalidInput);
}

TEST(FeatureDecideTest, Examples) {
  for (const auto& v : feature_decide(std::vector<double>{3, 3, 3, 3}, 1.0)) EXPECT_FALSE(v.flag);
  // Nine clients at 0 and one at 10: z = 9 / 3 = 3 for the outlier.
  std::vector<double> s(10, 0.0);
  s[4] = 10.0;
  const auto v = feature_decide(s, 1.0);
  EXPECT_NEAR(v[4].z, 3.0, 1e-12);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(v[i].flag, i == 4);
}

TEST(FeatureDecideTest, AffineInvariance) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> a(0.01, 50.0), b(-20.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(3 + trial % 10);
    for (auto& x : s) x = normal(rng);
    const double k = a(rng), c = b(rng);
    std::vector<double> t = s;
    for (auto& x : t) x = k * x + c;
    const auto vs = feature_decide(s, 1.0), vt = feature_decide(t, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(std::abs(vs[i].z) - 1.0) > 1e-9) EXPECT_EQ(vs[i].flag, vt[i].flag);
    }
  }
}

}  // namespace
}  // namespace frida::baseline
