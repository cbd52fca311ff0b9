#pragma once

#include <span>

#include "refint/model.hpp"

namespace refint::outlier {

struct TukeyOptions {
  double fence_coefficient = 1.5;
};

// One-shot Tukey fences: eliminates x < Q1 - k IQR and x > Q3 + k IQR with
// the quartiles taken from the full input. Needs n >= 4.
EliminationResult tukey_eliminate(std::span<const double> values,
                                  const TukeyOptions& options = {});

struct DixonReedOptions {
  double cutoff = 1.0 / 3.0;
  // Repeat with recomputed D and R after every elimination. When false each
  // tail is tested once against the full input.
  bool iterate = true;
};

// Block Dixon/Reed elimination. The most extreme value x of a tail (with its
// ties) is eliminated when D(x) / R > cutoff, where D(x) is the gap to the
// nearest less extreme value and R the range of the current data. The tail
// whose extreme lies further from the median is tested first. Needs n >= 3.
EliminationResult block_dr_eliminate(std::span<const double> values,
                                     const DixonReedOptions& options = {});

// Identity elimination; keeps every value.
EliminationResult no_elimination(std::span<const double> values);

}  // namespace refint::outlier
