#include "frida/report/config_io.h"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "frida/common/errors.h"

namespace frida::report {

namespace {

using fl::ExperimentConfig;
using fl::FreeRiderSpec;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE) fail(key, "expected a number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    fail(key, "expected a non-negative integer, got '" + v + "'");
  }
  errno = 0;
  const unsigned long long u = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) fail(key, "integer out of range");
  return u;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_u64(key, v));
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

// Settings gathered across several keys and applied after all keys are read.
struct Pending {
  bool dp_enabled = false;
  fl::DpConfig dp;
};

const std::map<std::string, std::function<void(ExperimentConfig&, Pending&, const std::string&,
                                               const std::string&)>>&
setters() {
  using S = std::function<void(ExperimentConfig&, Pending&, const std::string&, const std::string&)>;
  static const std::map<std::string, S> table = {
      {"run.seed", [](auto& c, auto&, auto& k, auto& v) { c.seed = to_u64(k, v); }},
      {"run.rounds", [](auto& c, auto&, auto& k, auto& v) { c.rounds = to_size(k, v); }},
      {"run.mitigate", [](auto& c, auto&, auto& k, auto& v) { c.mitigate = to_bool(k, v); }},
      {"run.mitigation_detector", [](auto& c, auto&, auto&, auto& v) { c.mitigation_detector = v; }},
      {"run.skip_rounds", [](auto& c, auto&, auto& k, auto& v) { c.skip_rounds = to_size(k, v); }},
      {"run.threads", [](auto& c, auto&, auto& k, auto& v) { c.threads = to_size(k, v); }},
      {"run.repeats", [](auto& c, auto&, auto& k, auto& v) { c.repeats = to_size(k, v); }},
      {"run.output", [](auto& c, auto&, auto&, auto& v) { c.output_dir = v; }},
      {"clients.count", [](auto& c, auto&, auto& k, auto& v) { c.num_clients = to_size(k, v); }},
      {"clients.samples", [](auto& c, auto&, auto& k, auto& v) { c.samples_per_client = to_size(k, v); }},
      {"clients.local_epochs", [](auto& c, auto&, auto& k, auto& v) { c.training.epochs = to_size(k, v); }},
      {"clients.batch_size", [](auto& c, auto&, auto& k, auto& v) { c.training.batch_size = to_size(k, v); }},
      {"optim.learning_rate",
       [](auto& c, auto&, auto& k, auto& v) { c.training.sgd.learning_rate = to_double(k, v); }},
      {"optim.momentum", [](auto& c, auto&, auto& k, auto& v) { c.training.sgd.momentum = to_double(k, v); }},
      {"optim.weight_decay",
       [](auto& c, auto&, auto& k, auto& v) { c.training.sgd.weight_decay = to_double(k, v); }},
      {"model.hidden",
       [](auto& c, auto&, auto& k, auto& v) {
         c.hidden.clear();
         for (const auto& w : split_list(v)) c.hidden.push_back(to_size(k, w));
       }},
      {"data.labels",
       [](auto& c, auto&, auto& k, auto& v) {
         const auto n = to_size(k, v);
         if (n > 100000) fail(k, "too many labels");
         c.num_labels = static_cast<int>(n);
       }},
      {"data.input_dim", [](auto& c, auto&, auto& k, auto& v) { c.input_dim = to_size(k, v); }},
      {"data.separation", [](auto& c, auto&, auto& k, auto& v) { c.blob.separation = to_double(k, v); }},
      {"data.spread", [](auto& c, auto&, auto& k, auto& v) { c.blob.spread = to_double(k, v); }},
      {"data.partition",
       [](auto& c, auto&, auto& k, auto& v) {
         c.label_shards = false;
         if (v == "iid") {
           c.partition.kind = data::PartitionScheme::Kind::kIid;
         } else if (v == "dirichlet") {
           c.partition.kind = data::PartitionScheme::Kind::kDirichlet;
         } else if (v == "label_shards") {
           c.label_shards = true;
         } else {
           fail(k, "expected iid, dirichlet or label_shards, got '" + v + "'");
         }
       }},
      {"data.dirichlet_alpha", [](auto& c, auto&, auto& k, auto& v) { c.partition.alpha = to_double(k, v); }},
      {"data.test_samples", [](auto& c, auto&, auto& k, auto& v) { c.test_samples = to_size(k, v); }},
      {"canary.size", [](auto& c, auto&, auto& k, auto& v) { c.canary_size = to_size(k, v); }},
      {"canary.epochs", [](auto& c, auto&, auto& k, auto& v) { c.training.canary_epochs = to_size(k, v); }},
      {"canary.pool", [](auto& c, auto&, auto& k, auto& v) { c.canary_pool = to_size(k, v); }},
      {"dp.enabled", [](auto&, auto& p, auto& k, auto& v) { p.dp_enabled = to_bool(k, v); }},
      {"dp.clip_norm", [](auto&, auto& p, auto& k, auto& v) { p.dp.clip_norm = to_double(k, v); }},
      {"dp.noise_sigma", [](auto&, auto& p, auto& k, auto& v) { p.dp.noise_sigma = to_double(k, v); }},
      {"dp.epsilon", [](auto&, auto& p, auto& k, auto& v) { p.dp.epsilon_label = to_double(k, v); }},
      {"detect.enabled", [](auto& c, auto&, auto&, auto& v) { c.detectors.enabled = split_list(v); }},
      {"detect.tau_loss", [](auto& c, auto&, auto& k, auto& v) { c.detectors.tau_loss = to_double(k, v); }},
      {"detect.alpha_cosine",
       [](auto& c, auto&, auto& k, auto& v) { c.detectors.alpha_cosine = to_double(k, v); }},
      {"detect.tau_pia", [](auto& c, auto&, auto& k, auto& v) { c.detectors.tau_pia = to_double(k, v); }},
      {"detect.tau_feature",
       [](auto& c, auto&, auto& k, auto& v) { c.detectors.tau_feature = to_double(k, v); }},
      {"detect.pia_attack",
       [](auto& c, auto&, auto& k, auto& v) {
         if (v == "wainakh") {
           c.detectors.pia_attack = fl::PiaAttack::kWainakh;
         } else if (v == "dai") {
           c.detectors.pia_attack = fl::PiaAttack::kDai;
         } else {
           fail(k, "expected wainakh or dai, got '" + v + "'");
         }
       }},
      {"detect.aux_per_label",
       [](auto& c, auto&, auto& k, auto& v) { c.detectors.aux_per_label = to_size(k, v); }},
  };
  return table;
}

void apply_freerider(FreeRiderSpec& fr, const std::string& field, const std::string& key,
                     const std::string& v) {
  auto& p = fr.strategy.params;
  if (field == "strategy") {
    if (v == "selfish") {
      fr.kind = FreeRiderSpec::Kind::kSelfish;
    } else {
      fr.kind = FreeRiderSpec::Kind::kStrategy;
      try {
        fr.strategy.kind = freerider::strategy_from_string(v);
      } catch (const std::exception&) {
        fail(key, "expected fraboni, lin, zhu or selfish, got '" + v + "'");
      }
    }
  } else if (field == "alpha") {
    p.alpha = to_double(key, v);
  } else if (field == "gamma") {
    p.gamma = to_double(key, v);
  } else if (field == "zhu_fraction") {
    p.zhu_fraction = to_double(key, v);
  } else if (field == "zhu_lambda") {
    p.zhu_lambda = to_double(key, v);
  } else if (field == "cold_start_sigma") {
    p.cold_start_sigma = to_double(key, v);
  } else if (field == "canary_epochs") {
    fr.selfish_canary_epochs = to_size(key, v);
  } else {
    fail(key, "unknown key");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConfigEntries parse_entries(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) fail(key, "duplicate key");
  }
  return out;
}

ConfigEntries read_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_entries(ss.str());
}

fl::ExperimentConfig config_from_entries(const ConfigEntries& entries) {
  for (const char* required : {"clients.count", "run.rounds"}) {
    if (!entries.count(required)) fail(required, "required key missing");
  }
  ExperimentConfig cfg;
  Pending pending;
  std::map<std::size_t, FreeRiderSpec> freeriders;
  std::map<std::size_t, bool> has_strategy;

  for (const auto& [key, value] : entries) {
    if (key.rfind("freerider.", 0) == 0) {
      const std::string rest = key.substr(10);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) fail(key, "expected freerider.<client>.<field>");
      const std::size_t client = to_size(key, rest.substr(0, dot));
      const std::string field = rest.substr(dot + 1);
      auto& fr = freeriders[client];
      fr.client = client;
      apply_freerider(fr, field, key, value);
      if (field == "strategy") has_strategy[client] = true;
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) fail(key, "unknown key");
    it->second(cfg, pending, key, value);
  }

  for (auto& [client, fr] : freeriders) {
    if (!has_strategy[client]) fail("freerider." + std::to_string(client) + ".strategy", "required key missing");
    cfg.freeriders.push_back(fr);
  }
  if (pending.dp_enabled) cfg.dp = pending.dp;
  fl::validate(cfg);
  return cfg;
}

fl::ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_entries(read_entries(path));
}

std::string resolve_key(const std::string& key) {
  const auto& table = setters();
  if (table.count(key) || key.rfind("freerider.", 0) == 0) return key;
  std::vector<std::string> matches;
  for (const auto& [full, setter] : table) {
    std::string underscored = full;
    for (auto& ch : underscored) {
      if (ch == '.') ch = '_';
    }
    const std::string last = full.substr(full.find('.') + 1);
    if (underscored == key || last == key) matches.push_back(full);
  }
  if (matches.size() != 1) {
    fail(key, matches.empty() ? "unknown key" : "ambiguous key, use the dotted form");
  }
  return matches.front();
}

std::string format_config(const fl::ExperimentConfig& cfg) {
  std::ostringstream o;
  auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& x : items) {
      if (!s.empty()) s += ',';
      s += fmt(x);
    }
    return s;
  };

  kv("run.seed", std::to_string(cfg.seed));
  kv("run.rounds", std::to_string(cfg.rounds));
  kv("run.mitigate", cfg.mitigate ? "true" : "false");
  if (!cfg.mitigation_detector.empty()) kv("run.mitigation_detector", cfg.mitigation_detector);
  kv("run.skip_rounds", std::to_string(cfg.skip_rounds));
  kv("run.threads", std::to_string(cfg.threads));
  kv("run.repeats", std::to_string(cfg.repeats));
  if (!cfg.output_dir.empty()) kv("run.output", cfg.output_dir);

  kv("clients.count", std::to_string(cfg.num_clients));
  kv("clients.samples", std::to_string(cfg.samples_per_client));
  kv("clients.local_epochs", std::to_string(cfg.training.epochs));
  kv("clients.batch_size", std::to_string(cfg.training.batch_size));

  kv("optim.learning_rate", format_double(cfg.training.sgd.learning_rate));
  kv("optim.momentum", format_double(cfg.training.sgd.momentum));
  kv("optim.weight_decay", format_double(cfg.training.sgd.weight_decay));

  kv("model.hidden", join(cfg.hidden, [](std::size_t h) { return std::to_string(h); }));

  kv("data.labels", std::to_string(cfg.num_labels));
  kv("data.input_dim", std::to_string(cfg.input_dim));
  kv("data.separation", format_double(cfg.blob.separation));
  kv("data.spread", format_double(cfg.blob.spread));
  kv("data.partition", cfg.label_shards ? "label_shards"
                       : cfg.partition.kind == data::PartitionScheme::Kind::kDirichlet ? "dirichlet"
                                                                                        : "iid");
  kv("data.dirichlet_alpha", format_double(cfg.partition.alpha));
  kv("data.test_samples", std::to_string(cfg.test_samples));

  kv("canary.size", std::to_string(cfg.canary_size));
  kv("canary.epochs", std::to_string(cfg.training.canary_epochs));
  kv("canary.pool", std::to_string(cfg.effective_canary_pool()));

  kv("dp.enabled", cfg.dp ? "true" : "false");
  if (cfg.dp) {
    kv("dp.clip_norm", format_double(cfg.dp->clip_norm));
    kv("dp.noise_sigma", format_double(cfg.dp->noise_sigma));
    kv("dp.epsilon", format_double(cfg.dp->epsilon_label));
  }

  const auto& d = cfg.detectors;
  kv("detect.enabled", join(d.enabled, [](const std::string& s) { return s; }));
  kv("detect.tau_loss", format_double(d.tau_loss));
  kv("detect.alpha_cosine", format_double(d.alpha_cosine));
  kv("detect.tau_pia", format_double(d.tau_pia));
  kv("detect.tau_feature", format_double(d.tau_feature));
  kv("detect.pia_attack", d.pia_attack == fl::PiaAttack::kDai ? "dai" : "wainakh");
  kv("detect.aux_per_label", std::to_string(d.aux_per_label));

  auto frs = cfg.freeriders;
  std::sort(frs.begin(), frs.end(), [](const auto& a, const auto& b) { return a.client < b.client; });
  for (const auto& fr : frs) {
    const std::string p = "freerider." + std::to_string(fr.client) + ".";
    if (fr.kind == FreeRiderSpec::Kind::kSelfish) {
      kv(p + "strategy", "selfish");
      kv(p + "canary_epochs", std::to_string(fr.selfish_canary_epochs));
      continue;
    }
    const auto& s = fr.strategy.params;
    kv(p + "strategy", freerider::to_string(fr.strategy.kind));
    kv(p + "alpha", format_double(s.alpha));
    kv(p + "gamma", format_double(s.gamma));
    kv(p + "zhu_fraction", format_double(s.zhu_fraction));
    kv(p + "zhu_lambda", format_double(s.zhu_lambda));
    kv(p + "cold_start_sigma", format_double(s.cold_start_sigma));
  }
  return o.str();
}

}  // namespace frida::report
