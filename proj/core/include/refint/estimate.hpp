#pragma once

#include <span>

namespace refint::estimate {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;  // zero spread; lower == upper

  double width() const noexcept { return upper - lower; }
  double midpoint() const noexcept { return 0.5 * (lower + upper); }
};

// mean -/+ 1.96 * sample SD. Needs n >= 2.
Interval parametric_interval(std::span<const double> values);

inline constexpr std::size_t kNonparametricMinN = 39;
inline constexpr std::size_t kNonparametricRecommendedN = 120;

// Order statistics at ranks 0.025 (n + 1) and 0.975 (n + 1), linearly
// interpolated at non-integer ranks. Needs n >= 39.
Interval nonparametric_interval(std::span<const double> values);

// Tukey biweight weight (1 - u^2)^2 on |u| < 1, zero elsewhere.
double biweight_weight(double u) noexcept;

struct BiweightOptions {
  double c = 3.7;
  double stop_rel = 1e-5;   // relative change in T_bi between iterations
  double stop_abs = 1e-12;  // fallback when T_bi is near zero
  int max_iter = 500;
};

struct RobustFitDiagnostics {
  double t_bi = 0.0;
  double s_bi = 0.0;
  double s_t = 0.0;
  int iterations = 0;
  double final_delta = 0.0;
  bool converged = false;
  bool degenerate = false;  // MAD == 0
};

// Biweight location by fixed-point iteration from the median, with residuals
// scaled by c * MAD / 0.6745. Only t_bi, iterations, final_delta, converged
// and degenerate are filled. Needs n >= 2.
RobustFitDiagnostics biweight_location(std::span<const double> values,
                                       const BiweightOptions& options = {});

// Biweight scale about `center`, residuals scaled by tuning * mad / 0.6745.
double biweight_scale(std::span<const double> values, double center, double mad, double tuning);

// Uncertainty of the biweight location given its scale.
double location_uncertainty(double s_bi, std::size_t n);

struct RobustOptions {
  BiweightOptions location;
  double scale_tuning = 205.6;
};

struct RobustInterval {
  Interval interval;
  RobustFitDiagnostics fit;
  double t_quantile = 0.0;
};

// T_bi -/+ t(0.025, n - 1) * sqrt(s_bi^2 + S_T^2). Needs n >= 3.
RobustInterval robust_interval(std::span<const double> values, const RobustOptions& options = {});

}  // namespace refint::estimate
