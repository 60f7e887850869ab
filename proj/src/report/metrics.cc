#include "frida/report/metrics.h"

#include "frida/common/errors.h"

namespace frida::report {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

RoundMetrics compute_metrics(const std::vector<bool>& flags, const std::vector<bool>& truth) {
  if (flags.size() != truth.size()) throw InvalidInput("compute_metrics: flags/truth length mismatch");
  RoundMetrics m;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (truth[i]) {
      ++(flags[i] ? m.tp : m.fn);
    } else {
      ++(flags[i] ? m.fp : m.tn);
    }
  }
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.fpr = ratio(m.fp, m.fp + m.tn);
  return m;
}

double mean_f1(const std::vector<RoundMetrics>& rows, const std::string& detector) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.detector != detector) continue;
    sum += r.f1;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace frida::report
