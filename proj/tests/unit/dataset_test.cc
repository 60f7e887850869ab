#include "frida/data/dataset.h"

#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "frida/common/errors.h"
#include "frida/nn/sgd.h"

namespace frida::data {
namespace {

TEST(DatasetTest, TwoLabelsFourSamplesAreBalanced) {
  const Dataset ds = make_synthetic(2, 4, 3, 1);
  EXPECT_EQ(ds.size(), 4u);
  EXPECT_EQ(ds.label_histogram(), (std::vector<std::size_t>{2, 2}));
  EXPECT_NO_THROW(ds.validate());
}

TEST(DatasetTest, BalancedUpToRounding) {
  const Dataset ds = make_synthetic(7, 100, 4, 3);
  for (auto c : ds.label_histogram()) {
    EXPECT_GE(c, 14u);
    EXPECT_LE(c, 15u);
  }
}

TEST(DatasetTest, SameSeedSameData) {
  const Dataset a = make_synthetic(3, 50, 5, 17);
  const Dataset b = make_synthetic(3, 50, 5, 17);
  const Dataset c = make_synthetic(3, 50, 5, 18);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(a.features, c.features);
}

TEST(DatasetTest, InvalidSynthetic) {
  EXPECT_THROW(make_synthetic(5, 4, 3, 1), InvalidInput);
  EXPECT_THROW(make_synthetic(1, 10, 3, 1), InvalidInput);
  EXPECT_THROW(make_synthetic(3, 10, 1, 1), InvalidInput);
}

TEST(DatasetTest, ValidateCatchesBadLabels) {
  Dataset ds = make_synthetic(3, 6, 2, 1);
  ds.labels[0] = 3;
  EXPECT_THROW(ds.validate(), InvalidInput);
  ds.labels.pop_back();
  EXPECT_THROW(ds.validate(), InvalidInput);
}

// Central training of the preset MLP on the 3-label task must reach >= 0.9
// held-out accuracy after 50 epochs.
TEST(DatasetTest, SyntheticTaskIsLearnable) {
  const std::uint64_t seed = 5;
  const std::size_t dim = 32;
  const Dataset train = make_synthetic(3, 300, dim, seed);
  const BlobTask task(3, dim, derive_seed(seed, Stream::kTask));
  Rng held_rng(1234);
  const Dataset held = task.sample(600, held_rng);

  const auto arch = nn::Architecture::mlp(dim, {32}, 3);
  Rng rng(9);
  nn::DenseNet net = nn::DenseNet::initialize(arch, rng);
  nn::SgdState opt({0.01, 0.9, 1e-5}, net.params());
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < 50; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += 32) {
      const std::size_t end = std::min(order.size(), start + 32);
      const Dataset batch =
          train.subset(std::span<const std::size_t>(order).subspan(start, end - start));
      const auto lg = net.loss_and_grad(batch.features, batch.labels);
      opt.step(net.mutable_params(), lg.grad);
    }
  }
  EXPECT_GE(net.accuracy(held.features, held.labels), 0.9);
}

TEST(AuxiliaryTest, TwentyPerLabel) {
  const Dataset aux = make_auxiliary(10, 20, 6, 3);
  EXPECT_EQ(aux.size(), 200u);
  EXPECT_EQ(aux.label_histogram(), std::vector<std::size_t>(10, 20));
  const Dataset again = make_auxiliary(10, 20, 6, 3);
  EXPECT_EQ(aux.features, again.features);
  EXPECT_THROW(make_auxiliary(10, 0, 6, 3), InvalidInput);
}

TEST(AuxiliaryTest, UsesTrainingStandardization) {
  const BlobTask task(4, 5, 77, {3.0, 1.0});
  const Dataset raw = make_auxiliary(4, 30, 5, 8);
  const Dataset std_aux = make_auxiliary(4, 30, 5, 8, &task.standardizer());
  const auto& s = task.standardizer();
  for (Eigen::Index j = 0; j < 5; ++j) {
    EXPECT_NEAR(std_aux.features(0, j), (raw.features(0, j) - s.mean(j)) / s.scale(j), 1e-15);
  }
}

TEST(DatasetTest, CsvRoundTrip) {
  const Dataset ds = make_synthetic(4, 40, 3, 21);
  const auto path = std::filesystem::temp_directory_path() / "frida_dataset_roundtrip.csv";
  save_csv(ds, path);
  const Dataset back = load_csv(path, 4);
  std::filesystem::remove(path);
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.num_labels, 4);
}

TEST(DatasetTest, SubsetAndConcat) {
  const Dataset ds = make_synthetic(2, 6, 2, 4);
  const std::vector<std::size_t> idx = {5, 0};
  const Dataset sub = ds.subset(idx);
  EXPECT_EQ(sub.labels, (Labels{ds.labels[5], ds.labels[0]}));
  EXPECT_EQ(Dataset::concat(sub, ds).size(), 8u);
  const std::vector<std::size_t> bad = {6};
  EXPECT_THROW(ds.subset(bad), InvalidInput);
}

}  // namespace
}  // namespace frida::data
