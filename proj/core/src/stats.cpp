#include "refint/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "refint/errors.hpp"

namespace refint::stats {

namespace {

void require_clean(std::span<const double> values, const char* what) {
  if (values.empty()) throw PreconditionError(std::string(what) + ": empty input");
  for (double v : values) {
    if (std::isnan(v)) throw PreconditionError(std::string(what) + ": NaN in input");
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
  require_clean(sorted, "quantile");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("quantile: p outside [0, 1]");
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;  // zero-based rank
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
  require_clean(values, "quantile");
  const auto sorted = sorted_copy(values);
  return quantile_sorted(sorted, p);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double mad(std::span<const double> values) {
  const double med = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - med));
  return median(dev);
}

double mean(std::span<const double> values) {
  require_clean(values, "mean");
  return compensated_sum(values) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  require_clean(values, "sample_sd");
  if (values.size() < 2) throw PreconditionError("sample_sd: need at least 2 values");
  const double m = mean(values);
  // Two-pass with the correction term for the residual of the mean.
  std::vector<double> sq;
  sq.reserve(values.size());
  double resid = 0.0;
  for (double v : values) {
    const double d = v - m;
    sq.push_back(d * d);
    resid += d;
  }
  const double n = static_cast<double>(values.size());
  const double ss = compensated_sum(sq) - resid * resid / n;
  return std::sqrt(std::max(ss, 0.0) / (n - 1.0));
}

SummaryStats summarize(std::span<const double> values) {
  require_clean(values, "summarize");
  const auto sorted = sorted_copy(values);
  SummaryStats s;
  s.n = sorted.size();
  s.mean = mean(sorted);
  s.sd = s.n >= 2 ? sample_sd(sorted) : 0.0;
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.min = sorted.front();
  s.max = sorted.back();
  s.mad = mad(sorted);

  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : sorted) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(s.n);
  m2 /= n;
  m3 /= n;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return s;
}

double student_t_upper_quantile(double tail_p, double df) {
  if (!(tail_p > 0.0 && tail_p < 0.5)) {
    throw PreconditionError("student_t_upper_quantile: tail_p must lie in (0, 0.5)");
  }
  if (!(df >= 1.0) || !std::isfinite(df)) {
    throw PreconditionError("student_t_upper_quantile: df must be >= 1");
  }
  const boost::math::students_t dist(df);
  return boost::math::quantile(boost::math::complement(dist, tail_p));
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace refint::stats
