#include "frida/report/sweep.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <fstream>
#include <stdexcept>

#include "frida/common/errors.h"
#include "frida/report/csv_sink.h"

namespace frida::report {

SweepSpec parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--sweep: expected KEY=V1,V2,...");
  SweepSpec spec;
  spec.key = resolve_key(arg.substr(0, eq));
  std::string rest = arg.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string v = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (v.empty()) throw ConfigError("--sweep: empty value in '" + arg + "'");
    spec.values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

std::vector<SweepCell> run_repeats(const fl::ExperimentConfig& cfg,
                                   const std::filesystem::path& outdir) {
  std::vector<SweepCell> cells;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    fl::ExperimentConfig run = cfg;
    run.seed = cfg.seed + r;
    run.repeats = 1;
    const auto dir = cfg.repeats == 1 ? outdir : outdir / ("rep-" + std::to_string(r));
    cells.push_back({"", r, run.seed, run_to_directory(run, dir)});
  }
  return cells;
}

std::vector<SweepCell> run_sweep(const ConfigEntries& base, const SweepSpec& spec,
                                 const std::filesystem::path& outdir) {
  std::vector<fl::ExperimentConfig> configs;
  for (const auto& v : spec.values) {
    ConfigEntries e = base;
    e[spec.key] = v;
    configs.push_back(config_from_entries(e));
  }

  std::vector<SweepCell> all;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto dir = outdir / (spec.key + "=" + spec.values[i]);
    for (auto& cell : run_repeats(configs[i], dir)) {
      cell.value = spec.values[i];
      all.push_back(std::move(cell));
    }
  }

  const auto path = outdir / "summary.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "key,value,repeat,seed,detector,mean_f1\n";
  for (const auto& cell : all) {
    std::vector<std::string> detectors;
    for (const auto& m : cell.metrics) {
      if (std::find(detectors.begin(), detectors.end(), m.detector) == detectors.end()) {
        detectors.push_back(m.detector);
      }
    }
    for (const auto& d : detectors) {
      out << spec.key << ',' << cell.value << ',' << cell.repeat << ',' << cell.seed << ',' << d << ','
          << format_double(mean_f1(cell.metrics, d)) << '\n';
    }
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");

  // Mean and sample std across repeats of the mean-of-rounds F1.
  const auto agg_path = outdir / "summary_repeats.csv";
  std::ofstream agg(agg_path, std::ios::binary | std::ios::trunc);
  if (!agg) throw std::runtime_error(agg_path.string() + ": cannot open for writing");
  agg << "key,value,detector,repeats,mean_f1,std_f1\n";
  for (const auto& v : spec.values) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> by_detector;
    for (const auto& cell : all) {
      if (cell.value != v) continue;
      for (const auto& m : cell.metrics) {
        if (!by_detector.count(m.detector)) order.push_back(m.detector);
        auto& f1s = by_detector[m.detector];
        if (f1s.size() <= cell.repeat) f1s.push_back(mean_f1(cell.metrics, m.detector));
      }
    }
    for (const auto& d : order) {
      const auto& xs = by_detector[d];
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
      agg << spec.key << ',' << v << ',' << d << ',' << xs.size() << ',' << format_double(mean) << ','
          << format_double(sd) << '\n';
    }
  }
  if (!agg) throw std::runtime_error(agg_path.string() + ": write failed");
  return all;
}

}  // namespace frida::report
