#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frida/report/config_io.h"
#include "frida/report/metrics.h"

namespace frida::report {

struct SweepSpec {
  std::string key;  // resolved dotted key
  std::vector<std::string> values;
};

// Parses KEY=V1,V2,... Throws ConfigError on malformed input.
SweepSpec parse_sweep(const std::string& arg);

struct SweepCell {
  std::string value;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::vector<RoundMetrics> metrics;
};

// Repeat r of a config runs with seed + r. With one repeat outputs go to
// outdir directly, otherwise to outdir/rep-<r>.
std::vector<SweepCell> run_repeats(const fl::ExperimentConfig& cfg,
                                   const std::filesystem::path& outdir);

// One sub-directory `<key>=<value>` per value, plus summary.csv (mean-of-rounds
// F1 per value, repeat and detector) and summary_repeats.csv (mean and sample
// std of that F1 across repeats). Every config is validated before the first
// run starts.
std::vector<SweepCell> run_sweep(const ConfigEntries& base, const SweepSpec& spec,
                                 const std::filesystem::path& outdir);

}  // namespace frida::report
