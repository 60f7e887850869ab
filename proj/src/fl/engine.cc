#include "frida/fl/engine.h"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "frida/common/errors.h"
#include "frida/data/canary.h"
#include "frida/data/dataset.h"
#include "frida/data/partition.h"
#include "frida/fl/fedavg.h"

namespace frida::fl {

namespace {

using nn::ParamVector;

struct Federation {
  nn::Architecture arch;
  data::BlobTask task;
  std::vector<data::Dataset> shards;
  data::Dataset train_union;
  data::Dataset test;
  std::optional<data::CanarySet> canaries;
  std::optional<data::Dataset> aux;
};

std::vector<data::Dataset> label_shards(const ExperimentConfig& cfg, const data::BlobTask& task) {
  // Sampling spc * l points yields exactly spc of every label.
  const std::size_t l = static_cast<std::size_t>(cfg.num_labels);
  std::vector<data::Dataset> shards;
  for (std::size_t c = 0; c < cfg.num_clients; ++c) {
    Rng rng = make_rng(cfg.seed, Stream::kClientData, {c});
    const data::Dataset draw = task.sample(cfg.samples_per_client * l, rng);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < draw.size(); ++i) {
      if (static_cast<std::size_t>(draw.labels[i]) == c % l) keep.push_back(i);
    }
    shards.push_back(draw.subset(keep));
  }
  return shards;
}

Federation build_federation(const ExperimentConfig& cfg) {
  Federation fed{nn::Architecture::mlp(cfg.input_dim, cfg.hidden,
                                       static_cast<std::size_t>(cfg.num_labels)),
                 data::BlobTask(cfg.num_labels, cfg.input_dim,
                                derive_seed(cfg.seed, Stream::kTask), cfg.blob),
                 {}, {}, {}, std::nullopt, std::nullopt};

  if (cfg.label_shards) {
    fed.shards = label_shards(cfg, fed.task);
  } else {
    Rng rng = make_rng(cfg.seed, Stream::kClientData);
    const data::Dataset all = fed.task.sample(cfg.samples_per_client * cfg.num_clients, rng);
    const auto part = data::partition(all, cfg.num_clients, cfg.partition,
                                      derive_seed(cfg.seed, Stream::kPartition));
    for (const auto& idx : part.client_indices) fed.shards.push_back(all.subset(idx));
  }
  fed.train_union = fed.shards.front();
  for (std::size_t c = 1; c < fed.shards.size(); ++c) {
    fed.train_union = data::Dataset::concat(fed.train_union, fed.shards[c]);
  }

  Rng test_rng = make_rng(cfg.seed, Stream::kTestData);
  fed.test = fed.task.sample(cfg.test_samples, test_rng);

  if (cfg.canaries_enabled()) {
    Rng pool_rng = make_rng(cfg.seed, Stream::kCanary, {0});
    fed.canaries.emplace(fed.task.sample(cfg.effective_canary_pool(), pool_rng),
                         cfg.canary_size, derive_seed(cfg.seed, Stream::kCanary, {1}));
  }
  if (cfg.detectors.has(kConsistencyPia) || cfg.detectors.has(kDiversityPia)) {
    fed.aux = data::make_auxiliary(cfg.num_labels, cfg.detectors.aux_per_label, cfg.input_dim,
                                   derive_seed(cfg.seed, Stream::kAuxiliary),
                                   &fed.task.standardizer());
  }
  return fed;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
// failure after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

struct History {
  ParamVector initial;
  std::deque<ParamVector> models;  // most recent last: ..., M^{t-2}, M^{t-1}

  freerider::PublicSignals signals(std::size_t t, std::size_t n_clients) const {
    freerider::PublicSignals sig{models.back(), std::nullopt, std::nullopt, initial, t, n_clients};
    const std::size_t k = models.size();
    if (k >= 2) sig.grad_prev = models[k - 1] - models[k - 2];
    if (k >= 3) sig.grad_prev2 = models[k - 2] - models[k - 3];
    return sig;
  }

  void push(ParamVector m) {
    models.push_back(std::move(m));
    while (models.size() > 3) models.pop_front();
  }
};

ParamVector client_update(const ExperimentConfig& cfg, const Federation& fed,
                          const History& history, std::size_t t, std::size_t client,
                          const data::CanaryBatch* window) {
  const ParamVector& global = history.models.back();
  Rng rng = make_rng(cfg.seed, Stream::kClientRound, {t, client});
  const FreeRiderSpec* fr = cfg.freerider_for(client);

  ParamVector local;
  if (fr != nullptr && fr->kind == FreeRiderSpec::Kind::kStrategy) {
    local = freerider::fabricate(fr->strategy, history.signals(t, cfg.num_clients), rng);
  } else if (fr != nullptr) {
    if (window == nullptr) throw InvalidInput("selfish client needs a canary window");
    LocalTraining selfish = cfg.training;
    selfish.epochs = 0;
    selfish.canary_epochs = fr->selfish_canary_epochs;
    local = honest_local_round(fed.arch, global, fed.shards[client], &window->samples, selfish, rng);
  } else {
    const data::Dataset* canary = window != nullptr ? &window->samples : nullptr;
    local = honest_local_round(fed.arch, global, fed.shards[client], canary, cfg.training, rng);
  }

  ParamVector update = local - global;
  if (cfg.dp && (fr == nullptr || fr->kind == FreeRiderSpec::Kind::kSelfish)) {
    update = dp_noise(update, *cfg.dp, rng);
  }
  return update;
}

std::vector<pia::LabelDistribution> infer_labels(const ExperimentConfig& cfg,
                                                 const Federation& fed, const RoundState& st) {
  const pia::TrainingProtocol protocol{
      cfg.training.sgd.learning_rate, cfg.training.sgd.momentum, cfg.training.batch_size,
      cfg.training.epochs, fed.canaries ? cfg.training.canary_epochs : 0};
  std::vector<pia::LabelDistribution> out;
  out.reserve(st.client_updates.size());
  if (cfg.detectors.pia_attack == PiaAttack::kWainakh) {
    const auto impacts = pia::LabelImpactModel::estimate(fed.arch, st.global_model, *fed.aux, protocol);
    for (std::size_t n = 0; n < st.client_updates.size(); ++n) {
      out.push_back(pia::pia_wainakh(st.client_updates[n], st.global_model, st.client_sizes[n], impacts));
    }
  } else {
    const auto basis = pia::LabelBasis::estimate(fed.arch, st.global_model, *fed.aux);
    for (std::size_t n = 0; n < st.client_updates.size(); ++n) {
      out.push_back(pia::pia_dai(st.client_updates[n], st.global_model, st.client_sizes[n], basis));
    }
  }
  return out;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const RoundObserver& observer) {
  validate(cfg);
  const Federation fed = build_federation(cfg);

  std::vector<std::unique_ptr<Detector>> detectors;
  bool need_labels = false;
  for (const auto& name : cfg.detectors.enabled) {
    detectors.push_back(make_detector(name, cfg.detectors));
    need_labels = need_labels || detectors.back()->needs_label_distributions();
  }
  std::string mitigation = cfg.mitigation_detector;
  if (mitigation.empty() && !cfg.detectors.enabled.empty()) mitigation = cfg.detectors.enabled.front();

  History history;
  {
    Rng init = make_rng(cfg.seed, Stream::kModelInit);
    history.initial = nn::DenseNet::initialize(fed.arch, init).params();
    history.push(history.initial);
  }
  const std::vector<bool> truth = cfg.truth();
  std::vector<pia::LabelDistribution> prev_dists;

  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    RoundRecord rec;
    RoundState& st = rec.state;
    st.t = t;
    st.global_model = history.models.back();
    for (const auto& shard : fed.shards) st.client_sizes.push_back(shard.size());

    std::optional<data::CanaryBatch> window;
    if (fed.canaries) {
      window = fed.canaries->window(t);
      st.canary_indices = window->pool_indices;
    }
    const data::CanaryBatch* wp = window ? &*window : nullptr;

    st.client_updates.assign(cfg.num_clients, ParamVector());
    parallel_for(cfg.num_clients, cfg.threads, [&](std::size_t n) {
      st.client_updates[n] = client_update(cfg, fed, history, t, n, wp);
    });

    if (need_labels) {
      st.label_dists = infer_labels(cfg, fed, st);
      st.prev_label_dists = prev_dists;
      prev_dists = st.label_dists;
    }

    Rng server_rng = make_rng(cfg.seed, Stream::kServerRound, {t});
    RoundContext ctx;
    ctx.round = t;
    ctx.arch = &fed.arch;
    ctx.global = &st.global_model;
    ctx.updates = st.client_updates;
    ctx.client_sizes = st.client_sizes;
    ctx.canaries = fed.canaries ? &*fed.canaries : nullptr;
    ctx.window = wp;
    ctx.label_dists = st.label_dists;
    ctx.prev_label_dists = st.prev_label_dists;
    ctx.truth = &truth;
    ctx.rng = &server_rng;
    for (auto& d : detectors) rec.detections.push_back(d->run(ctx));

    rec.truth = truth;
    rec.excluded.assign(cfg.num_clients, false);
    if (cfg.mitigate) {
      for (const auto& det : rec.detections) {
        if (det.detector == mitigation) rec.excluded = det.flags;
      }
      // Excluding everyone would stall training; keep the full cohort then.
      if (std::all_of(rec.excluded.begin(), rec.excluded.end(), [](bool b) { return b; })) {
        rec.excluded.assign(cfg.num_clients, false);
      }
    }

    std::vector<ParamVector> kept;
    std::vector<std::size_t> kept_sizes;
    for (std::size_t n = 0; n < cfg.num_clients; ++n) {
      if (rec.excluded[n]) continue;
      kept.push_back(st.global_model + st.client_updates[n]);
      kept_sizes.push_back(st.client_sizes[n]);
    }
    rec.new_global = fedavg(kept, kept_sizes);

    const nn::DenseNet net(fed.arch, rec.new_global);
    rec.train_accuracy = net.accuracy(fed.train_union.features, fed.train_union.labels);
    rec.test_accuracy = net.accuracy(fed.test.features, fed.test.labels);

    history.push(rec.new_global);
    observer(rec);
  }
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& cfg) {
  std::vector<RoundRecord> out;
  run_experiment(cfg, [&out](const RoundRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace frida::fl
