#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refint/model.hpp"

namespace refint::partition {

struct HarrisBoydOptions {
  double multiplier = 3.0;    // z* = multiplier * sqrt(mean n / normalizer)
  double normalizer = 120.0;
  // Supplementary SD-ratio criterion; off unless asked for.
  bool use_sd_ratio = false;
  double sd_ratio_limit = 1.5;
};

enum class Comparison { age, sex };

struct PartitionDecision {
  Comparison kind = Comparison::age;
  SegmentLabel first;
  SegmentLabel second;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double z = 0.0;
  double z_star = 0.0;
  double sd_ratio = 1.0;
  bool partition_required = false;
};

// z = |mean1 - mean2| / sqrt(sd1^2/n1 + sd2^2/n2) against
// z* = 3 sqrt(((n1 + n2)/2) / 120). Both segments need n >= 2.
PartitionDecision harris_boyd_z(const SummaryStats& first, const SummaryStats& second,
                                const HarrisBoydOptions& options = {});

// Half-open cut points 0, w, 2w, ... covering ages below `upper`.
std::vector<int> uniform_cuts(int width, int upper);

// One-year cells up to 15 years, then 20-year cells.
std::vector<int> nonuniform_cuts(int upper);

struct PartitionScheme {
  std::string name;
  std::vector<int> cuts;
};

inline const std::vector<int> kDefaultWidths = {1, 2, 3, 5, 8, 9, 10, 15, 20, 30, 40, 50};

struct ScanOptions {
  std::vector<int> widths = kDefaultWidths;
  bool include_nonuniform = false;
  // Run the age comparison within each sex, and compare F against M inside
  // every age cell.
  bool per_sex = false;
  bool all_pairs = false;  // compare every pair of cells, not only neighbours
  HarrisBoydOptions harris_boyd;
};

struct ScanGroup {
  PartitionScheme scheme;
  std::vector<PartitionDecision> decisions;
  std::vector<std::string> warnings;

  std::size_t flagged() const;
};

std::vector<ScanGroup> scan_partitions(const Cohort& cohort, const ScanOptions& options = {});

}  // namespace refint::partition
