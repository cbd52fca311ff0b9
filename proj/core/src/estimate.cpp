#include "refint/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "refint/errors.hpp"
#include "refint/stats.hpp"

namespace refint::estimate {

namespace {

constexpr double kNormalZ975 = 1.96;
constexpr double kMadToSigma = 0.6745;

void require_n(std::span<const double> values, std::size_t min_n, const char* what) {
  if (values.size() < min_n) {
    throw PreconditionError(std::string(what) + ": need at least " + std::to_string(min_n) +
                            " values");
  }
}

}  // namespace

Interval parametric_interval(std::span<const double> values) {
  require_n(values, 2, "parametric_interval");
  const double m = stats::mean(values);
  const double sd = stats::sample_sd(values);
  return {m - kNormalZ975 * sd, m + kNormalZ975 * sd, sd == 0.0};
}

Interval nonparametric_interval(std::span<const double> values) {
  require_n(values, kNonparametricMinN, "nonparametric_interval");
  std::vector<double> sorted(values.begin(), values.end());
  if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return std::isnan(v); })) {
    throw PreconditionError("nonparametric_interval: NaN in input");
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n1 = static_cast<double>(sorted.size() + 1);

  // Rank r (1-based); integer ranks pick the order statistic itself.
  auto at_rank = [&](double r) {
    const double floor_r = std::floor(r);
    const auto idx = static_cast<std::size_t>(floor_r) - 1;
    const double frac = r - floor_r;
    if (frac == 0.0 || idx + 1 >= sorted.size()) return sorted[idx];
    return sorted[idx] + frac * (sorted[idx + 1] - sorted[idx]);
  };
  // (n + 1) / 40 and 39 (n + 1) / 40 are exact whenever they are integers.
  Interval out{at_rank(n1 / 40.0), at_rank(39.0 * n1 / 40.0), false};
  out.degenerate = out.lower == out.upper;
  return out;
}

double biweight_weight(double u) noexcept {
  if (!(u > -1.0 && u < 1.0)) return 0.0;
  const double a = 1.0 - u * u;
  return a * a;
}

RobustFitDiagnostics biweight_location(std::span<const double> values,
                                       const BiweightOptions& options) {
  require_n(values, 2, "biweight_location");
  if (!(options.c >= 1.0)) throw PreconditionError("biweight_location: c must be >= 1");

  RobustFitDiagnostics fit;
  const double med = stats::median(values);
  const double mad = stats::mad(values);
  fit.t_bi = med;
  if (mad == 0.0) {
    fit.degenerate = true;
    return fit;
  }

  const double scale = options.c * mad / kMadToSigma;
  double t = med;
  for (int it = 1; it <= options.max_iter; ++it) {
    double sw = 0.0;
    double swx = 0.0;
    for (double x : values) {
      const double w = biweight_weight((x - t) / scale);
      sw += w;
      swx += w * x;
    }
    if (!(sw > 0.0)) throw NumericalError("biweight_location: all weights are zero");
    const double next = swx / sw;
    const double change = std::abs(next - t);
    fit.iterations = it;
    fit.final_delta = next != 0.0 ? change / std::abs(next) : change;
    t = next;
    if (change <= options.stop_rel * std::abs(next) || change < options.stop_abs) {
      fit.converged = true;
      break;
    }
  }
  fit.t_bi = t;
  return fit;
}

double biweight_scale(std::span<const double> values, double center, double mad, double tuning) {
  const double scale = tuning * mad / kMadToSigma;
  double num = 0.0;
  double den = 0.0;
  for (double x : values) {
    const double d = x - center;
    const double u = d / scale;
    if (!(u > -1.0 && u < 1.0)) continue;
    const double a = 1.0 - u * u;
    num += d * d * a * a * a * a;
    den += a * (1.0 - 5.0 * u * u);
  }
  if (den == 0.0) throw NumericalError("biweight_scale: zero denominator");
  return std::sqrt(static_cast<double>(values.size())) * std::sqrt(num) / std::abs(den);
}

double location_uncertainty(double s_bi, std::size_t n) {
  return s_bi / (0.39 * std::sqrt(static_cast<double>(n)));
}

RobustInterval robust_interval(std::span<const double> values, const RobustOptions& options) {
  require_n(values, 3, "robust_interval");
  RobustInterval out;
  out.fit = biweight_location(values, options.location);
  out.t_quantile =
      stats::student_t_upper_quantile(0.025, static_cast<double>(values.size() - 1));
  if (out.fit.degenerate) {
    out.interval = {out.fit.t_bi, out.fit.t_bi, true};
    return out;
  }
  const double mad = stats::mad(values);
  out.fit.s_bi = biweight_scale(values, out.fit.t_bi, mad, options.scale_tuning);
  out.fit.s_t = location_uncertainty(out.fit.s_bi, values.size());
  const double half =
      out.t_quantile * std::sqrt(out.fit.s_bi * out.fit.s_bi + out.fit.s_t * out.fit.s_t);
  out.interval = {out.fit.t_bi - half, out.fit.t_bi + half, half == 0.0};
  return out;
}

}  // namespace refint::estimate
