#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refint/model.hpp"
#include "refint/stats.hpp"

namespace refint::transform {

// |lambda1| below this uses the exact log branch.
inline constexpr double kLogBranchThreshold = 1e-4;

// T(y) = ((y + lambda2)^lambda1 - 1) / lambda1, or log(y + lambda2) at
// lambda1 = 0. Throws DomainError when y + lambda2 <= 0.
double boxcox_apply(double y, double lambda1, double lambda2);
std::vector<double> boxcox_apply(std::span<const double> values, double lambda1, double lambda2);
std::vector<double> boxcox_apply(std::span<const double> values, const TransformSpec& spec);

// Exact inverse of boxcox_apply. Throws DomainError when
// lambda1 * t + 1 <= 0 for lambda1 != 0.
double boxcox_inverse(double t, double lambda1, double lambda2);
double boxcox_inverse(double t, const TransformSpec& spec);

// Profile log-likelihood
//   -(n/2) log(sigma^2(lambda1)) + (lambda1 - 1) sum log(y + lambda2)
// with sigma^2 the ML variance of the transformed values. Returns -inf when
// the transform overflows.
double profile_loglik(std::span<const double> values, double lambda1, double lambda2);

struct FitOptions {
  double lambda_min = -3.0;
  double lambda_max = 3.0;
  double grid_step = 0.01;
  double refine_tolerance = 1e-7;
  // lambda2 candidates are -min + eps * 2^k for k < shift_grid_points,
  // with eps = 1e-3 * (max - min).
  int shift_grid_points = 11;
};

// Maximum-likelihood Box-Cox fit: coarse grid over lambda1 followed by
// golden-section refinement. With allow_shift and min(values) <= 0 the shift
// lambda2 is chosen jointly from a grid; otherwise lambda2 = 0.
TransformSpec boxcox_fit(std::span<const double> values, bool allow_shift,
                         const FitOptions& options = {});

enum class TransformPolicy { automatic, force, off };

struct NormalizedSegment {
  TransformSpec spec;
  std::vector<double> values;  // analysis scale, input order
  std::optional<stats::NormalityReport> before;
  std::optional<stats::NormalityReport> after;
  std::vector<std::string> warnings;
};

// Gate: keep the values when they pass every normality test, otherwise fit a
// Box-Cox transform (shifted iff some value <= 0) and apply it. Post-transform
// non-normality is reported as a warning only. When the gate's tests cannot
// run (too few values, constant data) the values are left untransformed and a
// warning is recorded.
NormalizedSegment normalize_if_needed(std::span<const double> values, double alpha = 0.05,
                                      TransformPolicy policy = TransformPolicy::automatic,
                                      stats::SkewTest skew_variant = stats::SkewTest::dagostino);

}  // namespace refint::transform
