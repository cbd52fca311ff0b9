#pragma once

#include <optional>
#include <span>
#include <vector>

#include "refint/model.hpp"

namespace refint::stats {

// Linear-interpolation order-statistic quantile at rank h = (n - 1)p + 1
// (1-based) on the sorted values. This is the only quantile convention used
// anywhere in the engine, Tukey quartiles included.
double quantile(std::span<const double> values, double p);
// Same, for input already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double median(std::span<const double> values);
// Median absolute deviation from the median, unscaled.
double mad(std::span<const double> values);
double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> values);

SummaryStats summarize(std::span<const double> values);

struct TestResult {
  double statistic = 0.0;
  std::optional<double> p_value;         // when the test yields one
  std::optional<double> critical_value;  // when the decision is a table lookup
  double alpha = 0.05;
  bool reject_normality = false;
};

// Anderson-Darling against a Normal with estimated mean and SD, with the
// small-sample adjustment A*^2 = A^2 (1 + 0.75/n + 2.25/n^2). Needs n >= 8.
TestResult anderson_darling_normal(std::span<const double> values, double alpha = 0.05);

// Kolmogorov-Smirnov against a Normal with estimated parameters, decided
// against Lilliefors critical values (0.886 / sqrt(n) at 5% for n > 30).
// Supports alpha in [0.01, 0.20]. Needs n >= 8.
TestResult ks_lilliefors_normal(std::span<const double> values, double alpha = 0.05);

enum class SkewTest {
  dagostino,      // D'Agostino (1970) transformed z
  large_sample,   // adjusted G1 over its standard error
};

// Two-sided test of zero skewness. Needs n >= 20.
TestResult skewness_test(std::span<const double> values, double alpha = 0.05,
                         SkewTest variant = SkewTest::dagostino);

struct NormalityReport {
  TestResult anderson_darling;
  TestResult kolmogorov_smirnov;
  TestResult skewness;
  bool normal = true;
};

// Runs all three tests; normal is false iff any of them rejects.
NormalityReport normality_tests(std::span<const double> values, double alpha = 0.05,
                                SkewTest skew_variant = SkewTest::dagostino);
bool is_normal(std::span<const double> values, double alpha = 0.05);

// t with P(T > t) = tail_p for a Student t with df degrees of freedom.
// tail_p must lie in (0, 0.5); df >= 1.
double student_t_upper_quantile(double tail_p, double df);

double normal_cdf(double z) noexcept;

}  // namespace refint::stats
