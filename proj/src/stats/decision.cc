#include "frida/stats/decision.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "frida/common/errors.h"

namespace frida::stats {

std::vector<ZVerdict> z_test(std::span<const double> scores, double tau, Sidedness sidedness) {
  if (scores.size() < 3) throw InvalidInput("z_test: need at least 3 scores");
  const double n = static_cast<double>(scores.size());
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / n);

  std::vector<ZVerdict> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i].sidedness = sidedness;
    if (!(sd > 0.0) || !std::isfinite(sd)) continue;
    const double z = (scores[i] - mean) / sd;
    out[i].z = z;
    switch (sidedness) {
      case Sidedness::kHigh: out[i].flag = z > tau; break;
      case Sidedness::kLow: out[i].flag = -z > tau; break;
      case Sidedness::kTwoSided: out[i].flag = std::abs(z) > tau; break;
    }
  }
  return out;
}

std::vector<bool> z_flags(std::span<const double> scores, double tau, Sidedness sidedness) {
  std::vector<bool> flags;
  for (const auto& v : z_test(scores, tau, sidedness)) flags.push_back(v.flag);
  return flags;
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The continued fraction converges fast for x < (a+1)/(a+b+2); use the
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidInput("student_t_two_sided_p: dof must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  const double p = incomplete_beta(0.5 * dof, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

TVerdict t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw InvalidInput("t_test: each group needs >= 2 values");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;
  double ssa = 0.0, ssb = 0.0;
  for (double x : a) ssa += (x - ma) * (x - ma);
  for (double x : b) ssb += (x - mb) * (x - mb);

  TVerdict v;
  v.dof = na + nb - 2.0;
  const double pooled = (ssa + ssb) / v.dof;
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  if (!(se > 0.0)) {
    // Both groups constant: identical means are indistinguishable, distinct
    // means are separated with certainty.
    v.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    v.p_value = ma == mb ? 1.0 : 0.0;
  } else {
    v.t = (ma - mb) / se;
    v.p_value = student_t_two_sided_p(v.t, v.dof);
  }
  v.flag = v.p_value >= alpha;
  return v;
}

}  // namespace frida::stats
