#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "frida/fl/config.h"
#include "frida/fl/engine.h"
#include "frida/report/metrics.h"

namespace frida::report {

inline constexpr const char* kMetricsHeader =
    "round,detector,tp,fp,tn,fn,precision,recall,f1,fpr,train_accuracy,test_accuracy";
inline constexpr const char* kScoresHeader = "round,client,detector,kind,sample,score";

// Streams one run into outdir/{metrics.csv, scores.csv, config.snapshot}.
// Rounds t <= cfg.skip_rounds are left out of metrics.csv but still scored.
class CsvSink {
 public:
  CsvSink(const std::filesystem::path& outdir, const fl::ExperimentConfig& cfg);

  void write(const fl::RoundRecord& rec);
  const std::vector<RoundMetrics>& metrics() const { return metrics_; }

 private:
  std::filesystem::path dir_;
  std::size_t skip_rounds_;
  std::ofstream metrics_out_;
  std::ofstream scores_out_;
  std::vector<RoundMetrics> metrics_;
};

std::string format_metrics_row(const RoundMetrics& m);
RoundMetrics parse_metrics_row(const std::string& line);
std::vector<RoundMetrics> read_metrics_csv(const std::filesystem::path& path);

// Runs cfg and writes its outputs into outdir. Returns the metrics rows.
std::vector<RoundMetrics> run_to_directory(const fl::ExperimentConfig& cfg,
                                           const std::filesystem::path& outdir);

}  // namespace frida::report
