#include "frida/fl/detectors.h"

#include <string>

#include "frida/baseline/features.h"
#include "frida/common/errors.h"
#include "frida/mia/mia.h"
#include "frida/pia/scoring.h"

namespace frida::fl {

namespace {

std::vector<bool> flags_of(const std::vector<stats::ZVerdict>& verdicts) {
  std::vector<bool> out;
  out.reserve(verdicts.size());
  for (const auto& v : verdicts) out.push_back(v.flag);
  return out;
}

void append_matrix(const mia::ScoreMatrix& sm, std::vector<ScoreRecord>& out) {
  for (std::size_t n = 0; n < sm.num_clients(); ++n) {
    for (std::size_t s = 0; s < sm.num_samples(); ++s) {
      out.push_back({n, mia::to_string(sm.kind), static_cast<long>(s),
                     sm.scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(s))});
    }
  }
}

void require_window(const RoundContext& ctx, const char* who) {
  if (ctx.window == nullptr || ctx.canaries == nullptr) {
    throw InvalidInput(std::string(who) + ": canary window unavailable");
  }
}

class LossMiaDetector : public Detector {
 public:
  explicit LossMiaDetector(double tau) : tau_(tau) {}
  std::string name() const override { return kLossMia; }
  bool needs_canaries() const override { return true; }

  DetectionOutput run(const RoundContext& ctx) override {
    require_window(ctx, kLossMia);
    const auto sm = mia::loss_scores(*ctx.arch, *ctx.global, ctx.updates, ctx.window->samples, ctx.round);
    DetectionOutput out{name(), sm.row_sums(), flags_of(mia::loss_decide(sm, tau_)), {}};
    append_matrix(sm, out.details);
    return out;
  }

 private:
  double tau_;
};

class CosineMiaDetector : public Detector {
 public:
  explicit CosineMiaDetector(double alpha) : alpha_(alpha) {}
  std::string name() const override { return kCosineMia; }
  bool needs_canaries() const override { return true; }

  DetectionOutput run(const RoundContext& ctx) override {
    require_window(ctx, kCosineMia);
    const auto complement = ctx.canaries->complement(ctx.round, *ctx.rng);
    const auto grads =
        mia::canary_gradients(*ctx.arch, *ctx.global, ctx.window->samples, complement.samples);
    const auto cs = mia::cosine_scores(ctx.updates, grads, ctx.round);
    const auto verdicts = mia::cosine_decide(cs.member, cs.nonmember, alpha_);
    DetectionOutput out{name(), {}, {}, {}};
    for (const auto& v : verdicts) {
      out.client_scores.push_back(v.p_value);
      out.flags.push_back(v.flag);
    }
    append_matrix(cs.member, out.details);
    append_matrix(cs.nonmember, out.details);
    return out;
  }

 private:
  double alpha_;
};

class ConsistencyPiaDetector : public Detector {
 public:
  explicit ConsistencyPiaDetector(double tau) : tau_(tau) {}
  std::string name() const override { return kConsistencyPia; }
  bool needs_label_distributions() const override { return true; }

  DetectionOutput run(const RoundContext& ctx) override {
    const std::size_t n = ctx.updates.size();
    DetectionOutput out{name(), std::vector<double>(n, 0.0), std::vector<bool>(n, false), {}};
    // No previous distribution in the first round: every score is 0.
    if (ctx.prev_label_dists.size() == n) {
      for (std::size_t i = 0; i < n; ++i) {
        out.client_scores[i] = pia::consistency_score(ctx.label_dists[i], ctx.prev_label_dists[i]);
      }
    }
    out.flags = flags_of(pia::pia_decide(out.client_scores, tau_, pia::PiaMode::kConsistency));
    return out;
  }

 private:
  double tau_;
};

class DiversityPiaDetector : public Detector {
 public:
  explicit DiversityPiaDetector(double tau) : tau_(tau) {}
  std::string name() const override { return kDiversityPia; }
  bool needs_label_distributions() const override { return true; }

  DetectionOutput run(const RoundContext& ctx) override {
    const std::vector<pia::LabelDistribution> dists(ctx.label_dists.begin(), ctx.label_dists.end());
    const auto global = pia::mean_distribution(dists);
    DetectionOutput out{name(), {}, {}, {}};
    for (const auto& d : dists) out.client_scores.push_back(pia::diversity_score(d, global));
    out.flags = flags_of(pia::pia_decide(out.client_scores, tau_, pia::PiaMode::kDiversity));
    return out;
  }

 private:
  double tau_;
};

class FeatureDetector : public Detector {
 public:
  FeatureDetector(baseline::Feature feature, double tau) : feature_(feature), tau_(tau) {}
  std::string name() const override { return baseline::to_string(feature_); }

  DetectionOutput run(const RoundContext& ctx) override {
    baseline::FeatureScores fs;
    switch (feature_) {
      case baseline::Feature::kL2: fs = baseline::l2_feature(ctx.updates); break;
      case baseline::Feature::kStd: fs = baseline::std_feature(ctx.updates); break;
      case baseline::Feature::kCosim: fs = baseline::cosim_feature(ctx.updates, *ctx.rng); break;
    }
    return {name(), fs.scores, flags_of(baseline::feature_decide(fs.scores, tau_)), {}};
  }

 private:
  baseline::Feature feature_;
  double tau_;
};

class OracleDetector : public Detector {
 public:
  std::string name() const override { return kOracle; }
  DetectionOutput run(const RoundContext& ctx) override {
    if (ctx.truth == nullptr) throw InvalidInput("oracle: ground truth unavailable");
    DetectionOutput out{name(), {}, {}, {}};
    for (bool t : *ctx.truth) {
      out.client_scores.push_back(t ? 1.0 : 0.0);
      out.flags.push_back(t);
    }
    return out;
  }
};

}  // namespace

std::unique_ptr<Detector> make_detector(const std::string& name, const DetectorSettings& s) {
  if (name == kLossMia) return std::make_unique<LossMiaDetector>(s.tau_loss);
  if (name == kCosineMia) return std::make_unique<CosineMiaDetector>(s.alpha_cosine);
  if (name == kConsistencyPia) return std::make_unique<ConsistencyPiaDetector>(s.tau_pia);
  if (name == kDiversityPia) return std::make_unique<DiversityPiaDetector>(s.tau_pia);
  if (name == kL2) return std::make_unique<FeatureDetector>(baseline::Feature::kL2, s.tau_feature);
  if (name == kStd) return std::make_unique<FeatureDetector>(baseline::Feature::kStd, s.tau_feature);
  if (name == kCosim) return std::make_unique<FeatureDetector>(baseline::Feature::kCosim, s.tau_feature);
  if (name == kOracle) return std::make_unique<OracleDetector>();
  throw InvalidInput("unknown detector '" + name + "'");
}

}  // namespace frida::fl
