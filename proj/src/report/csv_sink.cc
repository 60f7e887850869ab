#include "frida/report/csv_sink.h"

#include <sstream>
#include <stdexcept>

#include "frida/report/config_io.h"

namespace frida::report {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

void check(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

CsvSink::CsvSink(const std::filesystem::path& outdir, const fl::ExperimentConfig& cfg)
    : dir_(outdir), skip_rounds_(cfg.skip_rounds) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error(dir_.string() + ": " + ec.message());

  auto snapshot = open_out(dir_ / "config.snapshot");
  snapshot << format_config(cfg);
  check(snapshot, dir_ / "config.snapshot");

  metrics_out_ = open_out(dir_ / "metrics.csv");
  metrics_out_ << kMetricsHeader << '\n';
  scores_out_ = open_out(dir_ / "scores.csv");
  scores_out_ << kScoresHeader << '\n';
}

void CsvSink::write(const fl::RoundRecord& rec) {
  const std::size_t t = rec.state.t;
  auto score_row = [&](std::size_t client, const std::string& detector, const std::string& kind,
                       long sample, double score) {
    scores_out_ << t << ',' << client << ',' << detector << ',' << kind << ',' << sample << ','
                << format_double(score) << '\n';
  };

  for (const auto& det : rec.detections) {
    for (std::size_t n = 0; n < det.client_scores.size(); ++n) {
      score_row(n, det.detector, "score", -1, det.client_scores[n]);
      score_row(n, det.detector, "flag", -1, det.flags[n] ? 1.0 : 0.0);
    }
    for (const auto& d : det.details) score_row(d.client, det.detector, d.kind, d.sample, d.score);

    if (t <= skip_rounds_) continue;
    RoundMetrics m = compute_metrics(det.flags, rec.truth);
    m.round = t;
    m.detector = det.detector;
    m.train_accuracy = rec.train_accuracy;
    m.test_accuracy = rec.test_accuracy;
    metrics_out_ << format_metrics_row(m) << '\n';
    metrics_.push_back(std::move(m));
  }
  for (std::size_t n = 0; n < rec.state.label_dists.size(); ++n) {
    const auto& probs = rec.state.label_dists[n].probs;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      score_row(n, "pia", "label_prob", static_cast<long>(j), probs[j]);
    }
  }
  metrics_out_.flush();
  scores_out_.flush();
  check(metrics_out_, dir_ / "metrics.csv");
  check(scores_out_, dir_ / "scores.csv");
}

std::string format_metrics_row(const RoundMetrics& m) {
  std::ostringstream o;
  o << m.round << ',' << m.detector << ',' << m.tp << ',' << m.fp << ',' << m.tn << ',' << m.fn
    << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
    << format_double(m.f1) << ',' << format_double(m.fpr) << ',' << format_double(m.train_accuracy)
    << ',' << format_double(m.test_accuracy);
  return o.str();
}

RoundMetrics parse_metrics_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) f.push_back(item);
  if (f.size() != 12) throw std::runtime_error("metrics row: expected 12 columns, got " + std::to_string(f.size()));
  RoundMetrics m;
  m.round = std::stoul(f[0]);
  m.detector = f[1];
  m.tp = std::stoul(f[2]);
  m.fp = std::stoul(f[3]);
  m.tn = std::stoul(f[4]);
  m.fn = std::stoul(f[5]);
  m.precision = std::stod(f[6]);
  m.recall = std::stod(f[7]);
  m.f1 = std::stod(f[8]);
  m.fpr = std::stod(f[9]);
  m.train_accuracy = std::stod(f[10]);
  m.test_accuracy = std::stod(f[11]);
  return m;
}

std::vector<RoundMetrics> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::string line;
  std::getline(in, line);
  if (line != kMetricsHeader) throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<RoundMetrics> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_metrics_row(line));
  }
  return out;
}

std::vector<RoundMetrics> run_to_directory(const fl::ExperimentConfig& cfg,
                                           const std::filesystem::path& outdir) {
  CsvSink sink(outdir, cfg);
  fl::run_experiment(cfg, [&sink](const fl::RoundRecord& r) { sink.write(r); });
  return sink.metrics();
}

}  // namespace frida::report
