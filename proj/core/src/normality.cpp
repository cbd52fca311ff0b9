#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "refint/errors.hpp"
#include "refint/stats.hpp"

namespace refint::stats {

namespace {

struct Standardized {
  std::vector<double> z;  // sorted ascending
  double mean = 0.0;
  double sd = 0.0;
};

Standardized standardize(std::span<const double> values, std::size_t min_n, const char* what) {
  if (values.size() < min_n) {
    throw PreconditionError(std::string(what) + ": need at least " + std::to_string(min_n) +
                            " values");
  }
  Standardized s;
  s.mean = mean(values);
  s.sd = sample_sd(values);
  if (!(s.sd > 0.0)) throw PreconditionError(std::string(what) + ": constant data");
  s.z.reserve(values.size());
  for (double v : values) s.z.push_back((v - s.mean) / s.sd);
  std::sort(s.z.begin(), s.z.end());
  return s;
}

double log_normal_cdf(double z) {
  const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return std::log(std::max(p, std::numeric_limits<double>::min()));
}

double log_normal_sf(double z) { return log_normal_cdf(-z); }

// Stephens / D'Agostino piecewise approximation for the adjusted statistic.
double anderson_darling_p(double a2) {
  double p = 0.0;
  if (a2 >= 0.6) {
    p = std::exp(1.2937 - 5.709 * a2 + 0.0186 * a2 * a2);
  } else if (a2 >= 0.34) {
    p = std::exp(0.9177 - 4.279 * a2 - 1.38 * a2 * a2);
  } else if (a2 >= 0.2) {
    p = 1.0 - std::exp(-8.318 + 42.796 * a2 - 59.938 * a2 * a2);
  } else {
    p = 1.0 - std::exp(-13.436 + 101.14 * a2 - 223.73 * a2 * a2);
  }
  return std::clamp(p, 0.0, 1.0);
}

// Lilliefors' table of critical values for the estimated-parameter KS test.
constexpr std::array<double, 5> kLillieforsAlpha = {0.01, 0.05, 0.10, 0.15, 0.20};

struct LillieforsRow {
  int n;
  std::array<double, 5> crit;  // ordered as kLillieforsAlpha
};

constexpr std::array<LillieforsRow, 19> kLillieforsSmall = {{
    {4, {0.417, 0.381, 0.352, 0.319, 0.300}},  {5, {0.405, 0.337, 0.315, 0.299, 0.285}},
    {6, {0.364, 0.319, 0.294, 0.277, 0.265}},  {7, {0.348, 0.300, 0.276, 0.258, 0.247}},
    {8, {0.331, 0.285, 0.261, 0.244, 0.233}},  {9, {0.311, 0.271, 0.249, 0.233, 0.223}},
    {10, {0.294, 0.258, 0.239, 0.224, 0.215}}, {11, {0.284, 0.249, 0.230, 0.217, 0.206}},
    {12, {0.275, 0.242, 0.223, 0.212, 0.199}}, {13, {0.268, 0.234, 0.214, 0.202, 0.190}},
    {14, {0.261, 0.227, 0.207, 0.194, 0.183}}, {15, {0.257, 0.220, 0.201, 0.187, 0.177}},
    {16, {0.250, 0.213, 0.195, 0.182, 0.173}}, {17, {0.245, 0.206, 0.189, 0.177, 0.169}},
    {18, {0.239, 0.200, 0.184, 0.173, 0.166}}, {19, {0.235, 0.195, 0.179, 0.169, 0.163}},
    {20, {0.231, 0.190, 0.174, 0.166, 0.160}}, {25, {0.200, 0.173, 0.158, 0.147, 0.142}},
    {30, {0.187, 0.161, 0.144, 0.136, 0.131}},
}};

constexpr std::array<double, 5> kLillieforsLarge = {1.031, 0.886, 0.805, 0.768, 0.736};

// Interpolates a row of the table in log(alpha).
double interpolate_alpha(const std::array<double, 5>& row, double alpha) {
  for (std::size_t i = 0; i + 1 < kLillieforsAlpha.size(); ++i) {
    const double a0 = kLillieforsAlpha[i];
    const double a1 = kLillieforsAlpha[i + 1];
    if (alpha >= a0 && alpha <= a1) {
      const double t = (std::log(alpha) - std::log(a0)) / (std::log(a1) - std::log(a0));
      return row[i] + t * (row[i + 1] - row[i]);
    }
  }
  throw PreconditionError("ks_lilliefors_normal: alpha must lie in [0.01, 0.20]");
}

double lilliefors_critical(std::size_t n, double alpha) {
  if (n > 30) return interpolate_alpha(kLillieforsLarge, alpha) / std::sqrt(static_cast<double>(n));
  const auto ni = static_cast<int>(n);
  for (std::size_t i = 0; i < kLillieforsSmall.size(); ++i) {
    const auto& row = kLillieforsSmall[i];
    if (row.n == ni) return interpolate_alpha(row.crit, alpha);
    if (row.n > ni) {
      const auto& prev = kLillieforsSmall[i - 1];
      const double c0 = interpolate_alpha(prev.crit, alpha);
      const double c1 = interpolate_alpha(row.crit, alpha);
      const double t = static_cast<double>(ni - prev.n) / static_cast<double>(row.n - prev.n);
      return c0 + t * (c1 - c0);
    }
  }
  return interpolate_alpha(kLillieforsSmall.back().crit, alpha);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
}

}  // namespace

TestResult anderson_darling_normal(std::span<const double> values, double alpha) {
  check_alpha(alpha);
  const auto s = standardize(values, 8, "anderson_darling_normal");
  const std::size_t n = s.z.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 2.0 * static_cast<double>(i + 1) - 1.0;
    acc += w * (log_normal_cdf(s.z[i]) + log_normal_sf(s.z[n - 1 - i]));
  }
  const double nd = static_cast<double>(n);
  const double a2 = -nd - acc / nd;
  const double adjusted = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));

  TestResult r;
  r.statistic = adjusted;
  r.p_value = anderson_darling_p(adjusted);
  r.alpha = alpha;
  r.reject_normality = *r.p_value < alpha;
  return r;
}

TestResult ks_lilliefors_normal(std::span<const double> values, double alpha) {
  check_alpha(alpha);
  const auto s = standardize(values, 8, "ks_lilliefors_normal");
  const std::size_t n = s.z.size();
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(s.z[i]);
    d = std::max(d, static_cast<double>(i + 1) / nd - f);
    d = std::max(d, f - static_cast<double>(i) / nd);
  }
  TestResult r;
  r.statistic = d;
  r.critical_value = lilliefors_critical(n, alpha);
  r.alpha = alpha;
  r.reject_normality = d > *r.critical_value;
  return r;
}

TestResult skewness_test(std::span<const double> values, double alpha, SkewTest variant) {
  check_alpha(alpha);
  const auto s = standardize(values, 20, "skewness_test");
  const double n = static_cast<double>(s.z.size());

  // Moment skewness g1 from the standardized values (sd cancels).
  double m2 = 0.0;
  double m3 = 0.0;
  const double zbar = mean(s.z);
  for (double z : s.z) {
    const double d = z - zbar;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  const double g1 = m3 / std::pow(m2, 1.5);

  double z = 0.0;
  if (variant == SkewTest::dagostino) {
    const double y = g1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
    const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                         ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    const double delta = 1.0 / std::sqrt(std::log(std::sqrt(w2)));
    const double a = std::sqrt(2.0 / (w2 - 1.0));
    const double ya = y / a;
    z = delta * std::log(ya + std::sqrt(ya * ya + 1.0));
  } else {
    const double big_g1 = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
    const double ses = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
    z = big_g1 / ses;
  }

  TestResult r;
  r.statistic = z;
  r.p_value = std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0, 1.0);
  r.alpha = alpha;
  r.reject_normality = *r.p_value < alpha;
  return r;
}

NormalityReport normality_tests(std::span<const double> values, double alpha,
                                SkewTest skew_variant) {
  NormalityReport report;
  report.anderson_darling = anderson_darling_normal(values, alpha);
  report.kolmogorov_smirnov = ks_lilliefors_normal(values, alpha);
  report.skewness = skewness_test(values, alpha, skew_variant);
  report.normal = !(report.anderson_darling.reject_normality ||
                    report.kolmogorov_smirnov.reject_normality ||
                    report.skewness.reject_normality);
  return report;
}

bool is_normal(std::span<const double> values, double alpha) {
  return normality_tests(values, alpha).normal;
}

}  // namespace refint::stats
