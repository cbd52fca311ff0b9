#include "refint/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "refint/errors.hpp"
#include "refint/stats.hpp"

namespace refint::partition {

PartitionDecision harris_boyd_z(const SummaryStats& first, const SummaryStats& second,
                                const HarrisBoydOptions& options) {
  if (first.n < 2 || second.n < 2) {
    throw PreconditionError("harris_boyd_z: each segment needs n >= 2");
  }
  if (!std::isfinite(first.sd) || !std::isfinite(second.sd)) {
    throw PreconditionError("harris_boyd_z: standard deviation undefined");
  }
  const auto n1 = static_cast<double>(first.n);
  const auto n2 = static_cast<double>(second.n);
  PartitionDecision d;
  d.n1 = first.n;
  d.n2 = second.n;
  const double se = std::sqrt(first.sd * first.sd / n1 + second.sd * second.sd / n2);
  const double diff = std::abs(first.mean - second.mean);
  if (se > 0.0) {
    d.z = diff / se;
  } else {
    d.z = diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  d.z_star = options.multiplier * std::sqrt(((n1 + n2) / 2.0) / options.normalizer);
  const double big = std::max(first.sd, second.sd);
  const double small = std::min(first.sd, second.sd);
  d.sd_ratio = small > 0.0 ? big / small : (big > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  d.partition_required = d.z > d.z_star;
  if (options.use_sd_ratio && d.sd_ratio > options.sd_ratio_limit) d.partition_required = true;
  return d;
}

std::vector<int> uniform_cuts(int width, int upper) {
  if (width <= 0) throw PreconditionError("partition width must be positive");
  std::vector<int> cuts{0};
  while (cuts.back() < upper) cuts.push_back(cuts.back() + width);
  return cuts;
}

std::vector<int> nonuniform_cuts(int upper) {
  std::vector<int> cuts;
  for (int a = 0; a <= 15; ++a) cuts.push_back(a);
  while (cuts.back() < upper) cuts.push_back(cuts.back() + 20);
  return cuts;
}

std::size_t ScanGroup::flagged() const {
  return static_cast<std::size_t>(std::count_if(
      decisions.begin(), decisions.end(),
      [](const PartitionDecision& d) { return d.partition_required; }));
}

namespace {

struct Cell {
  SegmentLabel label;
  SummaryStats stats;
};

std::vector<Cell> build_cells(const Cohort& cohort, const std::vector<int>& cuts, SexFilter sex,
                              std::vector<std::string>& warnings) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const SegmentLabel label{{cuts[i], cuts[i + 1]}, sex};
    const auto segment = make_segment(cohort, label);
    if (segment.values.size() < 2) {
      if (!segment.values.empty()) {
        warnings.push_back("skipped " + label.to_string() + ": n = " +
                           std::to_string(segment.values.size()));
      }
      continue;
    }
    cells.push_back({label, stats::summarize(segment.values)});
  }
  return cells;
}

void compare_cells(const std::vector<Cell>& cells, const ScanOptions& options,
                   std::vector<PartitionDecision>& out) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t stop = options.all_pairs ? cells.size() : std::min(cells.size(), i + 2);
    for (std::size_t j = i + 1; j < stop; ++j) {
      auto d = harris_boyd_z(cells[i].stats, cells[j].stats, options.harris_boyd);
      d.kind = Comparison::age;
      d.first = cells[i].label;
      d.second = cells[j].label;
      out.push_back(d);
    }
  }
}

}  // namespace

std::vector<ScanGroup> scan_partitions(const Cohort& cohort, const ScanOptions& options) {
  if (cohort.observations.empty()) throw PreconditionError("scan_partitions: empty cohort");
  int max_age = 0;
  for (const auto& obs : cohort.observations) max_age = std::max(max_age, obs.age());
  const int upper = max_age + 1;

  std::vector<PartitionScheme> schemes;
  for (int w : options.widths) {
    schemes.push_back({"width " + std::to_string(w), uniform_cuts(w, upper)});
  }
  if (options.include_nonuniform) schemes.push_back({"nonuniform", nonuniform_cuts(upper)});

  std::vector<ScanGroup> groups;
  for (auto& scheme : schemes) {
    ScanGroup group;
    group.scheme = std::move(scheme);
    if (!options.per_sex) {
      auto cells = build_cells(cohort, group.scheme.cuts, SexFilter::both, group.warnings);
      compare_cells(cells, options, group.decisions);
    } else {
      auto female = build_cells(cohort, group.scheme.cuts, SexFilter::female, group.warnings);
      auto male = build_cells(cohort, group.scheme.cuts, SexFilter::male, group.warnings);
      compare_cells(female, options, group.decisions);
      compare_cells(male, options, group.decisions);
      for (const auto& f : female) {
        auto m = std::find_if(male.begin(), male.end(),
                              [&](const Cell& c) { return c.label.ages == f.label.ages; });
        if (m == male.end()) continue;
        auto d = harris_boyd_z(f.stats, m->stats, options.harris_boyd);
        d.kind = Comparison::sex;
        d.first = f.label;
        d.second = m->label;
        group.decisions.push_back(d);
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace refint::partition
