#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refint/estimate.hpp"
#include "refint/model.hpp"
#include "refint/outlier.hpp"
#include "refint/stats.hpp"
#include "refint/transform.hpp"

namespace refint {

inline constexpr std::string_view kEngineName = "refint";
inline constexpr std::string_view kEngineVersion = "1.0.0";
inline constexpr std::string_view kQuantileConvention =
    "linear interpolation at rank h = (n - 1) p + 1";

enum class SexHandling { pooled, by_sex };

struct RunConfig {
  int width = 10;
  std::vector<int> cuts;  // explicit cut points; overrides width when set
  int max_age = 100;      // upper edge of the last age cell
  SexHandling sex = SexHandling::pooled;
  std::vector<Elimination> eliminations = {Elimination::none, Elimination::tukey,
                                           Elimination::block_dr};
  std::vector<Method> methods = {Method::parametric, Method::nonparametric, Method::robust};
  double alpha = 0.05;
  transform::TransformPolicy transform = transform::TransformPolicy::automatic;
  stats::SkewTest skew_test = stats::SkewTest::dagostino;
  double c = 3.7;
  double scale_tuning = 205.6;
  double fence_coefficient = 1.5;
  double dr_cutoff = 1.0 / 3.0;
  bool dr_iterate = true;
  bool refit_after_elimination = false;
  std::optional<std::uint64_t> seed;  // echoed for synthetic runs

  // Throws PreconditionError on an empty elimination or method set or an
  // invalid cut list.
  void validate() const;
  // Age cell boundaries actually used.
  std::vector<int> age_cuts() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Everything about a segment that does not depend on the cell: its summary,
// the normality gate and the one shared Box-Cox fit.
struct PreparedSegment {
  Segment segment;
  std::optional<SummaryStats> summary;
  transform::NormalizedSegment normalized;
  std::optional<std::string> error;  // preparation failed; every cell inherits it
};

PreparedSegment prepare_segment(Segment segment, const RunConfig& config);

// Runs one (elimination, method) cell. Per-cell failures become an error
// marker on the record instead of an exception.
IntervalRecord run_cell(const PreparedSegment& prepared, Elimination elimination, Method method,
                        const RunConfig& config);
IntervalRecord run_cell(const Segment& segment, Elimination elimination, Method method,
                        const RunConfig& config);

struct EliminationRow {
  Elimination procedure = Elimination::none;
  std::size_t n_eliminated = 0;
  std::vector<IntervalRecord> records;

  friend bool operator==(const EliminationRow&, const EliminationRow&) = default;
};

struct SegmentReport {
  SegmentLabel label;
  std::size_t n = 0;
  std::optional<SummaryStats> summary;
  TransformSpec transform;
  std::map<std::string, double> normality;  // gate statistics and p-values
  std::vector<std::string> warnings;
  std::vector<EliminationRow> eliminations;

  friend bool operator==(const SegmentReport&, const SegmentReport&) = default;
};

struct ReportMetadata {
  std::string engine{kEngineName};
  std::string version{kEngineVersion};
  std::string quantile_convention{kQuantileConvention};
  std::string rng;  // synthetic generator, when known
  RunConfig config;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ReportTable {
  ReportMetadata metadata;
  std::vector<SegmentReport> segments;

  std::vector<IntervalRecord> records() const;
  bool has_errors() const;

  friend bool operator==(const ReportTable&, const ReportTable&) = default;
};

// Partitions the cohort and fills every (segment, elimination, method) cell,
// ordered by segment, then elimination, then method as configured.
ReportTable run_matrix(const Cohort& cohort, const RunConfig& config);

enum class ReportFormat { json, csv, plotdata };
std::optional<ReportFormat> parse_report_format(std::string_view name);

std::string emit_report(const ReportTable& table, ReportFormat format);
// Throws PreconditionError for an unknown format name.
std::string emit_report(const ReportTable& table, std::string_view format);

// Inverse of the json format.
ReportTable parse_report_json(std::string_view text);

}  // namespace refint
