// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every tolerance lives in the constants below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "frida/fl/engine.h"
#include "frida/nn/dense_net.h"
#include "frida/report/config_io.h"
#include "frida/report/csv_sink.h"
#include "frida/report/metrics.h"
#include "frida/stats/decision.h"
#include "support/decision_oracles.h"
#include "support/oracles.h"

namespace {

using frida::report::ConfigEntries;
using frida::report::RoundMetrics;
using Clock = std::chrono::steady_clock;

// Gradient oracle.
constexpr int kGradNets = 25;
constexpr double kFdStep = 1e-5;
constexpr double kFdTolerance = 1e-5;
constexpr double kFdFloor = 1e-8;
constexpr double kGradSeconds = 10.0;
// Convergence delay.
constexpr int kDelaySeeds = 5;
constexpr int kDelayMaxInversions = 1;
constexpr double kDelaySeconds = 300.0;
// Loss MIA.
constexpr double kLossF1 = 0.8;
constexpr double kLossSeconds = 180.0;
// Cosine MIA.
constexpr std::size_t kWarmupRounds = 5;
constexpr double kCosineRate = 0.8;
constexpr double kCosineF1 = 0.8;
constexpr double kCosineAlpha = 0.05;
// PIA.
constexpr double kSimplexTolerance = 1e-9;
constexpr std::size_t kPiaAfterRound = 5;
constexpr double kPiaArgmaxRate = 0.9;
// Diversity, camouflage, DP.
constexpr double kDiversityF1 = 0.8;
constexpr double kCamouflageGap = 0.15;
constexpr int kCamouflageSeeds = 5;
constexpr double kDpDiversityF1 = 0.8;
constexpr double kDpLossF1 = 0.3;
// Decision policy.
constexpr double kDecisionTolerance = 1e-6;
// Selfish probe.
constexpr double kSelfishLossRate = 0.6;
constexpr double kSelfishCosineRate = 0.2;

// Desk-scale IID task shared by the detector criteria: 8 clients, one
// free-rider at index 0.
ConfigEntries desk(const std::string& strategy) {
  return {{"clients.count", "8"},       {"run.rounds", "60"},
          {"optim.learning_rate", "0.02"}, {"data.labels", "40"},
          {"data.spread", "2"},         {"clients.samples", "200"},
          {"canary.size", "100"},       {"canary.epochs", "3"},
          {"freerider.0.strategy", strategy}};
}

frida::fl::ExperimentConfig build(ConfigEntries e) { return frida::report::config_from_entries(e); }

std::vector<RoundMetrics> metrics_of(const std::vector<frida::fl::RoundRecord>& recs) {
  std::vector<RoundMetrics> out;
  for (const auto& r : recs) {
    for (const auto& d : r.detections) {
      auto m = frida::report::compute_metrics(d.flags, r.truth);
      m.round = r.state.t;
      m.detector = d.detector;
      out.push_back(m);
    }
  }
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome gradient_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> width(2, 7), depth(1, 3), batch(1, 6);
  double worst = 0.0;
  for (int i = 0; i < kGradNets; ++i) {
    std::vector<std::size_t> widths = {width(rng)};
    const std::size_t hidden = depth(rng);
    for (std::size_t k = 0; k < hidden; ++k) widths.push_back(width(rng));
    widths.push_back(width(rng));
    frida::nn::Architecture arch{widths};
    const auto params = frida::testing::random_params(arch.shapes(), rng, 0.7);
    const std::size_t b = batch(rng);
    const auto x = frida::testing::random_matrix(b, widths.front(), rng);
    std::vector<int> y(b);
    std::uniform_int_distribution<int> label(0, static_cast<int>(widths.back()) - 1);
    for (auto& v : y) v = label(rng);
    const frida::nn::DenseNet net(arch, params);
    const auto analytic = net.loss_and_grad(x, y).grad;
    const std::vector<double> flat(params.values().begin(), params.values().end());
    const auto fd = frida::testing::finite_difference_gradient(widths, flat, x, y, kFdStep);
    worst = std::max(worst, frida::testing::max_relative_error(analytic.values(), fd, kFdFloor));
  }
  const double secs = seconds_since(start);
  return {worst <= kFdTolerance && secs < kGradSeconds,
          fmt("max rel err %.3g", worst) + fmt(", %.2f s", secs)};
}

Outcome convergence_delay() {
  const auto start = Clock::now();
  int inversions = 0;
  std::string detail;
  for (int seed = 1; seed <= kDelaySeeds; ++seed) {
    std::vector<double> acc;
    for (int frs : {0, 1, 3, 5}) {
      ConfigEntries e = {{"clients.count", "10"},         {"run.rounds", "40"},
                         {"run.seed", std::to_string(seed)}, {"optim.learning_rate", "0.02"},
                         {"optim.momentum", "0.9"},       {"data.labels", "3"},
                         {"data.spread", "3"},            {"clients.samples", "200"},
                         {"data.test_samples", "5000"},   {"canary.size", "0"},
                         {"canary.epochs", "0"},          {"detect.enabled", "oracle"}};
      for (int i = 0; i < frs; ++i) e["freerider." + std::to_string(i) + ".strategy"] = "lin";
      acc.push_back(frida::fl::run_experiment(build(e)).back().test_accuracy);
    }
    for (std::size_t k = 1; k < acc.size(); ++k) inversions += acc[k] > acc[k - 1];
    detail += fmt(" s%.0f[", seed);
    for (double a : acc) detail += fmt("%.3f ", a);
    detail.back() = ']';
  }
  const double secs = seconds_since(start);
  return {inversions <= kDelayMaxInversions && secs < kDelaySeconds,
          fmt("inversions %.0f", inversions) + detail + fmt(", %.1f s", secs)};
}

Outcome loss_mia() {
  const auto start = Clock::now();
  std::map<int, double> f1;
  for (int epochs : {1, 3, 5}) {
    auto e = desk("lin");
    e["detect.enabled"] = "loss_mia";
    e["canary.epochs"] = std::to_string(epochs);
    f1[epochs] = frida::report::mean_f1(metrics_of(frida::fl::run_experiment(build(e))), "loss_mia");
  }
  const double secs = seconds_since(start);
  return {f1[3] >= kLossF1 && f1[5] >= f1[1] && secs < kLossSeconds,
          fmt("F1 ce1 %.3f", f1[1]) + fmt(" ce3 %.3f", f1[3]) + fmt(" ce5 %.3f", f1[5]) +
              fmt(", %.1f s", secs)};
}

Outcome cosine_mia() {
  auto e = desk("lin");
  e["detect.enabled"] = "cosine_mia";
  e["detect.alpha_cosine"] = fmt("%.17g", kCosineAlpha);
  const auto recs = frida::fl::run_experiment(build(e));
  std::size_t honest_sig = 0, honest_total = 0, fr_ns = 0, fr_total = 0;
  for (const auto& r : recs) {
    if (r.state.t <= kWarmupRounds) continue;
    const auto& p = r.detections.front().client_scores;
    for (std::size_t n = 0; n < p.size(); ++n) {
      if (r.truth[n]) {
        fr_ns += p[n] >= kCosineAlpha;
        ++fr_total;
      } else {
        honest_sig += p[n] < kCosineAlpha;
        ++honest_total;
      }
    }
  }
  const double h = static_cast<double>(honest_sig) / static_cast<double>(honest_total);
  const double f = static_cast<double>(fr_ns) / static_cast<double>(fr_total);
  const double f1 = frida::report::mean_f1(metrics_of(recs), "cosine_mia");
  return {h >= kCosineRate && f >= kCosineRate && f1 >= kCosineF1,
          fmt("honest p<a %.3f", h) + fmt(", FR p>=a %.3f", f) + fmt(", F1 %.3f", f1)};
}

Outcome pia_accuracy() {
  const ConfigEntries e = {{"clients.count", "8"},       {"run.rounds", "20"},
                           {"optim.learning_rate", "0.02"}, {"data.labels", "4"},
                           {"data.spread", "2"},         {"data.partition", "label_shards"},
                           {"clients.samples", "200"},   {"canary.size", "0"},
                           {"canary.epochs", "0"},       {"detect.enabled", "diversity_pia"},
                           {"detect.pia_attack", "wainakh"}};
  const auto cfg = build(e);
  bool simplex = true;
  std::size_t hits = 0, total = 0;
  for (const auto& r : frida::fl::run_experiment(cfg)) {
    for (std::size_t n = 0; n < r.state.label_dists.size(); ++n) {
      const auto& probs = r.state.label_dists[n].probs;
      double sum = 0.0;
      for (double p : probs) {
        simplex = simplex && p >= 0.0;
        sum += p;
      }
      simplex = simplex && std::abs(sum - 1.0) <= kSimplexTolerance;
      if (r.state.t <= kPiaAfterRound) continue;
      const auto argmax = static_cast<std::size_t>(
          std::max_element(probs.begin(), probs.end()) - probs.begin());
      hits += argmax == n % static_cast<std::size_t>(cfg.num_labels);
      ++total;
    }
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(total);
  return {simplex && rate >= kPiaArgmaxRate,
          std::string(simplex ? "simplex ok" : "simplex violated") + fmt(", argmax hit %.3f", rate)};
}

Outcome diversity_detection() {
  auto e = desk("fraboni");
  e["detect.enabled"] = "diversity_pia";
  const double f1 =
      frida::report::mean_f1(metrics_of(frida::fl::run_experiment(build(e))), "diversity_pia");
  return {f1 >= kDiversityF1, fmt("F1 %.3f", f1)};
}

Outcome camouflage() {
  int wins = 0;
  std::string detail;
  for (int seed = 1; seed <= kCamouflageSeeds; ++seed) {
    auto e = desk("zhu");
    e["freerider.0.zhu_fraction"] = "0.6";
    e["freerider.0.zhu_lambda"] = "0";
    e["run.seed"] = std::to_string(seed);
    e["detect.enabled"] = "l2,std,cosine_mia,diversity_pia";
    const auto m = metrics_of(frida::fl::run_experiment(build(e)));
    using frida::report::mean_f1;
    const double feature = std::max(mean_f1(m, "l2"), mean_f1(m, "std"));
    const double frida = std::max(mean_f1(m, "cosine_mia"), mean_f1(m, "diversity_pia"));
    wins += feature <= frida - kCamouflageGap;
    detail += fmt(" s%.0f[", seed) + fmt("%.2f vs ", feature) + fmt("%.2f]", frida);
  }
  return {2 * wins > kCamouflageSeeds, fmt("seeds with gap %.0f/5", wins) + detail};
}

Outcome dp_ablation() {
  auto e = desk("fraboni");
  e["dp.enabled"] = "true";
  e["dp.clip_norm"] = "0.5";
  e["dp.noise_sigma"] = "1.0";
  e["detect.enabled"] = "loss_mia,diversity_pia";
  const auto m = metrics_of(frida::fl::run_experiment(build(e)));
  const double div = frida::report::mean_f1(m, "diversity_pia");
  const double loss = frida::report::mean_f1(m, "loss_mia");
  return {div >= kDpDiversityF1 && loss <= kDpLossF1,
          fmt("diversity F1 %.3f", div) + fmt(", loss F1 %.3f", loss)};
}

Outcome decision_exactness() {
  double worst = 0.0;
  std::size_t cases = 0;
  for (const auto& c : frida::testing::golden_z_cases()) {
    const auto want = frida::testing::z_oracle(c.scores);
    const auto got = frida::stats::z_test(c.scores, 1.0, frida::stats::Sidedness::kTwoSided);
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i].z - want[i]));
    ++cases;
  }
  for (const auto& c : frida::testing::golden_t_cases()) {
    const auto want = frida::testing::t_test_oracle(c.a, c.b);
    const auto got = frida::stats::t_test(c.a, c.b, 0.05);
    worst = std::max(worst, std::abs(got.t - want.t) / std::max(1.0, std::abs(want.t)));
    worst = std::max(worst, std::abs(got.p_value - want.p));
    ++cases;
  }
  return {cases == 50 && worst <= kDecisionTolerance,
          fmt("%.0f cases", static_cast<double>(cases)) + fmt(", max err %.3g", worst)};
}

Outcome determinism() {
  auto e = desk("lin");
  e["detect.enabled"] = "loss_mia,cosine_mia,diversity_pia,l2";
  e["run.rounds"] = "15";
  const auto cfg = build(e);
  const auto root = std::filesystem::temp_directory_path() / "frida-acceptance-determinism";
  std::filesystem::remove_all(root);
  frida::report::run_to_directory(cfg, root / "a");
  frida::report::run_to_directory(cfg, root / "b");
  const auto a = frida::testing::slurp_file(root / "a" / "metrics.csv");
  const auto b = frida::testing::slurp_file(root / "b" / "metrics.csv");
  std::filesystem::remove_all(root);
  return {!a.empty() && a == b, fmt("%.0f bytes", static_cast<double>(a.size()))};
}

Outcome selfish_probe() {
  // Local epochs 0 and three canary epochs for the selfish client.
  auto e = desk("selfish");
  e["freerider.0.canary_epochs"] = "3";
  e["detect.enabled"] = "loss_mia,cosine_mia";
  std::size_t loss = 0, cosine = 0, rounds = 0;
  for (const auto& r : frida::fl::run_experiment(build(e))) {
    for (const auto& d : r.detections) {
      (d.detector == "loss_mia" ? loss : cosine) += d.flags[0];
    }
    ++rounds;
  }
  const double lr = static_cast<double>(loss) / static_cast<double>(rounds);
  const double cr = static_cast<double>(cosine) / static_cast<double>(rounds);
  return {lr >= kSelfishLossRate && cr <= kSelfishCosineRate,
          fmt("loss flag rate %.3f", lr) + fmt(", cosine flag rate %.3f", cr)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 gradient oracle", gradient_oracle},
      {"2 convergence delay", convergence_delay},
      {"3 loss-MIA separation", loss_mia},
      {"4 cosine-MIA discrimination", cosine_mia},
      {"5 PIA simplex and accuracy", pia_accuracy},
      {"6 diversity detection", diversity_detection},
      {"7 F^Z camouflage", camouflage},
      {"8 DP ablation", dp_ablation},
      {"9 decision-policy exactness", decision_exactness},
      {"10 determinism", determinism},
      {"11 adaptive selfish probe", selfish_probe},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
