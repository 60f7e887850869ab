#pragma once

#include <span>
#include <vector>

namespace frida::stats {

enum class Sidedness { kHigh, kLow, kTwoSided };

struct ZVerdict {
  double z = 0.0;  // signed (s - mean) / std
  bool flag = false;
  Sidedness sidedness = Sidedness::kTwoSided;
};

// Cohort z-score outlier test with population std. A zero-spread cohort
// yields z = 0 and no flags.
std::vector<ZVerdict> z_test(std::span<const double> scores, double tau, Sidedness sidedness);
std::vector<bool> z_flags(std::span<const double> scores, double tau, Sidedness sidedness);

struct TVerdict {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  // True when the means are statistically indistinguishable (p >= alpha).
  bool flag = false;
};

// Two-sample Student t-test with pooled variance and a two-sided p-value.
// Both groups constant with equal means gives t = 0, p = 1.
TVerdict t_test(std::span<const double> a, std::span<const double> b, double alpha);

// Regularized incomplete beta I_x(a, b) via Lentz continued fraction.
double incomplete_beta(double a, double b, double x);
// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

}  // namespace frida::stats
