#include "refint/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "refint/errors.hpp"

namespace refint::transform {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool log_branch(double lambda1) { return std::abs(lambda1) < kLogBranchThreshold; }

// Box-Cox of a value already mapped to log(y + lambda2).
double from_log(double log_shifted, double lambda1) {
  if (log_branch(lambda1)) return log_shifted;
  return std::expm1(lambda1 * log_shifted) / lambda1;
}

struct LogData {
  std::vector<double> logs;
  double sum = 0.0;
};

LogData shifted_logs(std::span<const double> values, double lambda2) {
  LogData d;
  d.logs.reserve(values.size());
  for (double y : values) {
    const double shifted = y + lambda2;
    if (!(shifted > 0.0)) {
      throw DomainError("Box-Cox requires y + lambda2 > 0");
    }
    const double l = std::log(shifted);
    d.logs.push_back(l);
    d.sum += l;
  }
  return d;
}

double loglik_from_logs(const LogData& d, double lambda1) {
  // Welford accumulation keeps this to one transform per value.
  double mean = 0.0;
  double ss = 0.0;
  double count = 0.0;
  for (double l : d.logs) {
    const double t = from_log(l, lambda1);
    count += 1.0;
    const double delta = t - mean;
    mean += delta / count;
    ss += delta * (t - mean);
  }
  const double var = ss / count;
  if (!std::isfinite(var) || !(var > 0.0)) return kNegInf;
  const double ll = -0.5 * count * std::log(var) + (lambda1 - 1.0) * d.sum;
  return std::isfinite(ll) ? ll : kNegInf;
}

struct Optimum {
  double lambda1 = 1.0;
  double loglik = kNegInf;
};

Optimum grid_search(const LogData& d, const FitOptions& opt) {
  Optimum best;
  const auto steps =
      static_cast<long>(std::llround((opt.lambda_max - opt.lambda_min) / opt.grid_step));
  for (long i = 0; i <= steps; ++i) {
    const double lambda = opt.lambda_min + static_cast<double>(i) * opt.grid_step;
    const double ll = loglik_from_logs(d, lambda);
    if (ll > best.loglik) best = {lambda, ll};
  }
  return best;
}

Optimum golden_refine(const LogData& d, Optimum start, const FitOptions& opt) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(opt.lambda_min, start.lambda1 - opt.grid_step);
  double b = std::min(opt.lambda_max, start.lambda1 + opt.grid_step);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = loglik_from_logs(d, x1);
  double f2 = loglik_from_logs(d, x2);
  while (b - a > opt.refine_tolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = loglik_from_logs(d, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = loglik_from_logs(d, x1);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = loglik_from_logs(d, mid);
  if (fmid > start.loglik) return {mid, fmid};
  return start;
}

}  // namespace

double boxcox_apply(double y, double lambda1, double lambda2) {
  const double shifted = y + lambda2;
  if (!(shifted > 0.0)) throw DomainError("Box-Cox requires y + lambda2 > 0");
  return from_log(std::log(shifted), lambda1);
}

std::vector<double> boxcox_apply(std::span<const double> values, double lambda1, double lambda2) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double y : values) out.push_back(boxcox_apply(y, lambda1, lambda2));
  return out;
}

std::vector<double> boxcox_apply(std::span<const double> values, const TransformSpec& spec) {
  if (!spec.applied) return {values.begin(), values.end()};
  return boxcox_apply(values, spec.lambda1, spec.lambda2);
}

double boxcox_inverse(double t, double lambda1, double lambda2) {
  if (log_branch(lambda1)) return std::exp(t) - lambda2;
  const double base = lambda1 * t;
  if (!(base + 1.0 > 0.0)) throw DomainError("Box-Cox inverse requires lambda1 * t + 1 > 0");
  return std::exp(std::log1p(base) / lambda1) - lambda2;
}

double boxcox_inverse(double t, const TransformSpec& spec) {
  if (!spec.applied) return t;
  return boxcox_inverse(t, spec.lambda1, spec.lambda2);
}

double profile_loglik(std::span<const double> values, double lambda1, double lambda2) {
  if (values.empty()) throw PreconditionError("profile_loglik: empty input");
  return loglik_from_logs(shifted_logs(values, lambda2), lambda1);
}

TransformSpec boxcox_fit(std::span<const double> values, bool allow_shift,
                         const FitOptions& options) {
  if (values.size() < 10) throw PreconditionError("boxcox_fit: need at least 10 values");
  if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
    throw PreconditionError("boxcox_fit: non-finite value in input");
  }
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (lo <= 0.0 && !allow_shift) {
    throw PreconditionError("boxcox_fit: non-positive values require allow_shift");
  }
  if (!(hi > lo)) throw NumericalError("boxcox_fit: likelihood undefined for constant data");

  std::vector<double> shifts;
  if (lo <= 0.0) {
    const double eps = 1e-3 * (hi - lo);
    double step = eps;
    for (int k = 0; k < options.shift_grid_points; ++k, step *= 2.0) {
      const double shift = -lo + step;
      if (shift > 0.0 && lo + shift > 0.0) shifts.push_back(shift);
    }
  } else {
    shifts.push_back(0.0);
  }

  TransformSpec best;
  best.applied = true;
  double best_ll = kNegInf;
  for (double shift : shifts) {
    const auto logs = shifted_logs(values, shift);
    auto opt = grid_search(logs, options);
    if (!std::isfinite(opt.loglik)) continue;
    opt = golden_refine(logs, opt, options);
    if (opt.loglik > best_ll) {
      best_ll = opt.loglik;
      best.lambda1 = opt.lambda1;
      best.lambda2 = shift;
    }
  }
  if (!std::isfinite(best_ll)) {
    throw NumericalError("boxcox_fit: likelihood non-finite for every candidate");
  }
  best.loglik = best_ll;
  return best;
}

NormalizedSegment normalize_if_needed(std::span<const double> values, double alpha,
                                      TransformPolicy policy, stats::SkewTest skew_variant) {
  if (values.empty()) throw PreconditionError("normalize_if_needed: empty segment");
  NormalizedSegment out;
  out.values.assign(values.begin(), values.end());
  if (policy == TransformPolicy::off) return out;

  bool needs_transform = policy == TransformPolicy::force;
  if (policy == TransformPolicy::automatic) {
    try {
      out.before = stats::normality_tests(values, alpha, skew_variant);
      needs_transform = !out.before->normal;
    } catch (const PreconditionError&) {
      out.warnings.emplace_back("normality_gate_skipped");
      return out;
    }
  }
  if (!needs_transform) return out;

  const double lo = *std::min_element(values.begin(), values.end());
  out.spec = boxcox_fit(values, lo <= 0.0);
  out.values = boxcox_apply(values, out.spec);
  try {
    out.after = stats::normality_tests(out.values, alpha, skew_variant);
    if (!out.after->normal) out.warnings.emplace_back("post_transform_non_normal");
  } catch (const PreconditionError&) {
    out.warnings.emplace_back("post_transform_gate_skipped");
  }
  return out;
}

}  // namespace refint::transform
