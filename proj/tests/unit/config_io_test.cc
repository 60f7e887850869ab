#include "frida/report/config_io.h"

#include <gtest/gtest.h>

#include "frida/common/errors.h"
#include "report_fixtures.h"

namespace frida::report {
namespace {

std::string error_of(const std::string& text) {
  try {
    config_from_entries(parse_entries(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigIoTest, ParsesTinyConfig) {
  const auto cfg = config_from_entries(parse_entries(testing::tiny_config_text()));
  EXPECT_EQ(cfg.num_clients, 5u);
  EXPECT_EQ(cfg.rounds, 3u);
  EXPECT_EQ(cfg.seed, 4u);
  EXPECT_EQ(cfg.hidden, std::vector<std::size_t>{8});
  EXPECT_EQ(cfg.detectors.enabled, (std::vector<std::string>{"loss_mia", "l2"}));
  ASSERT_EQ(cfg.freeriders.size(), 1u);
  EXPECT_EQ(cfg.freeriders[0].client, 1u);
  EXPECT_EQ(cfg.freeriders[0].strategy.kind, freerider::StrategyKind::kLin);
}

TEST(ConfigIoTest, CommentsAndBlankLinesIgnored) {
  const auto e = parse_entries("# header\n\n  a = 1  # trailing\nb=two\n");
  EXPECT_EQ(e.size(), 2u);
  EXPECT_EQ(e.at("a"), "1");
  EXPECT_EQ(e.at("b"), "two");
}

TEST(ConfigIoTest, FormatRoundTrips) {
  auto text = testing::tiny_config_text();
  text += "dp.enabled = true\ndp.clip_norm = 0.25\nfreerider.3.strategy = selfish\n"
          "freerider.1.alpha = 0.3\ndata.partition = dirichlet\ndata.dirichlet_alpha = 0.5\n";
  const auto cfg = config_from_entries(parse_entries(text));
  const auto echo = format_config(cfg);
  const auto again = config_from_entries(parse_entries(echo));
  EXPECT_EQ(format_config(again), echo);
  ASSERT_TRUE(again.dp.has_value());
  EXPECT_EQ(again.dp->clip_norm, 0.25);
  EXPECT_EQ(again.freeriders.size(), 2u);
  EXPECT_EQ(again.freeriders[0].strategy.params.alpha, 0.3);
  EXPECT_EQ(again.partition.alpha, 0.5);
}

TEST(ConfigIoTest, ErrorsNameTheKey) {
  const auto base = testing::tiny_config_text();
  EXPECT_NE(error_of(base + "bogus.key = 1\n").find("bogus.key"), std::string::npos);
  EXPECT_NE(error_of(base + "run.rounds = 4\n").find("run.rounds"), std::string::npos);
  EXPECT_NE(error_of("run.rounds = 3\n").find("clients.count"), std::string::npos);
  EXPECT_NE(error_of(base + "optim.learning_rate = fast\n").find("optim.learning_rate"),
            std::string::npos);
  EXPECT_NE(error_of(base + "freerider.2.alpha = 1\n").find("freerider.2.strategy"),
            std::string::npos);
  EXPECT_THROW(parse_entries("no equals sign\n"), ConfigError);
}

TEST(ConfigIoTest, ValidationFailuresAreConfigErrors) {
  const auto base = testing::tiny_config_text();
  EXPECT_THROW(config_from_entries(parse_entries(base + "freerider.7.strategy = lin\n")),
               ConfigError);
  EXPECT_THROW(config_from_entries(parse_entries(base + "detect.tau_loss = 0\n")), ConfigError);
}

TEST(ConfigIoTest, ResolvesShorthandKeys) {
  EXPECT_EQ(resolve_key("canary_epochs"), "canary.epochs");
  EXPECT_EQ(resolve_key("canary.epochs"), "canary.epochs");
  EXPECT_EQ(resolve_key("freerider.0.alpha"), "freerider.0.alpha");
  EXPECT_THROW(resolve_key("nonexistent"), ConfigError);
}

TEST(ConfigIoTest, DoubleFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace frida::report
