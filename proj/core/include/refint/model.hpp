#pragma once

// Core domain records shared by the whole engine. Everything here is a value
// type: immutable once built, cheap to copy, safe to share between threads.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace refint {

enum class Sex { female, male, unknown };
enum class SexFilter { female, male, both };
enum class Elimination { none, tukey, block_dr };
enum class Method { parametric, nonparametric, robust };

enum class ExclusionReason {
  missing_age,
  missing_value,
  non_numeric,
  negative_value,
  age_cutoff,
  bad_sex_code,
};

std::string_view to_string(Sex sex) noexcept;
std::string_view to_string(SexFilter filter) noexcept;
std::string_view to_string(Elimination elimination) noexcept;
std::string_view to_string(Method method) noexcept;
std::string_view to_string(ExclusionReason reason) noexcept;

// Inverse of to_string. Elimination and Method also accept the CLI short
// forms ("dr", "para", "nonpara").
std::optional<SexFilter> parse_sex_filter(std::string_view text);
std::optional<Elimination> parse_elimination(std::string_view text);
std::optional<Method> parse_method(std::string_view text);
std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text);

// Accepts F, M, FEMALE, MALE in any case; everything else is unknown.
Sex parse_sex_code(std::string_view text) noexcept;

bool matches(SexFilter filter, Sex sex) noexcept;

class Observation {
 public:
  // Throws PreconditionError when age < 0 or value is negative / not finite.
  Observation(std::string subject_id, int age, Sex sex, double value);

  const std::string& subject_id() const noexcept { return subject_id_; }
  int age() const noexcept { return age_; }
  Sex sex() const noexcept { return sex_; }
  double value() const noexcept { return value_; }

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  std::string subject_id_;
  int age_;
  Sex sex_;
  double value_;
};

struct Exclusion {
  std::size_t line = 0;  // 1-based line number in the source, 0 if synthetic
  std::string raw;
  ExclusionReason reason = ExclusionReason::non_numeric;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

struct Cohort {
  std::vector<Observation> observations;
  std::vector<Exclusion> exclusion_log;

  std::size_t input_rows() const noexcept {
    return observations.size() + exclusion_log.size();
  }

  friend bool operator==(const Cohort&, const Cohort&) = default;
};

// Half-open age range [lo, hi) in completed years.
struct AgeRange {
  int lo = 0;
  int hi = 0;

  bool contains(int age) const noexcept { return lo <= age && age < hi; }
  std::string label() const;  // "0-10"

  friend bool operator==(const AgeRange&, const AgeRange&) = default;
  friend auto operator<=>(const AgeRange&, const AgeRange&) = default;
};

struct SegmentLabel {
  AgeRange ages;
  SexFilter sex = SexFilter::both;

  std::string to_string() const;  // "0-10" or "0-10/F"

  friend bool operator==(const SegmentLabel&, const SegmentLabel&) = default;
};

struct Segment {
  SegmentLabel label;
  std::vector<double> values;
};

// Collects the values of every observation that falls in the labelled cell.
Segment make_segment(const Cohort& cohort, const SegmentLabel& label);

struct TransformSpec {
  bool applied = false;
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  std::optional<double> loglik;

  static TransformSpec identity() { return {}; }

  // Checks the convention for unapplied specs and lambda2 >= 0.
  void validate() const;

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

struct TukeyFences {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;

  friend bool operator==(const TukeyFences&, const TukeyFences&) = default;
};

enum class Tail { low, high };
std::string_view to_string(Tail tail) noexcept;

// One test of an extreme value by the block D/R procedure.
struct DixonReedPass {
  Tail tail = Tail::high;
  double extreme = 0.0;
  double gap = 0.0;    // D(x)
  double range = 0.0;  // R
  bool eliminated = false;
  std::size_t block_size = 0;

  friend bool operator==(const DixonReedPass&, const DixonReedPass&) = default;
};

class EliminationResult {
 public:
  EliminationResult() = default;

  // All three sequences are stored sorted ascending. Throws
  // PreconditionError unless the eliminated sets are strict tail blocks.
  EliminationResult(Elimination procedure, std::vector<double> retained,
                    std::vector<double> eliminated_low,
                    std::vector<double> eliminated_high);

  Elimination procedure() const noexcept { return procedure_; }
  const std::vector<double>& retained() const noexcept { return retained_; }
  const std::vector<double>& eliminated_low() const noexcept { return low_; }
  const std::vector<double>& eliminated_high() const noexcept { return high_; }
  std::size_t n_eliminated() const noexcept { return low_.size() + high_.size(); }
  std::size_t n_input() const noexcept { return n_eliminated() + retained_.size(); }

  std::optional<TukeyFences> fences;
  std::vector<DixonReedPass> passes;
  std::vector<std::string> flags;

 private:
  Elimination procedure_ = Elimination::none;
  std::vector<double> retained_;
  std::vector<double> low_;
  std::vector<double> high_;
};

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double mad = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double skewness = 0.0;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

struct IntervalRecord {
  SegmentLabel segment;
  std::size_t n_input = 0;
  Elimination elimination = Elimination::none;
  std::size_t n_eliminated = 0;
  Method method = Method::parametric;
  // Absent when the cell errored.
  std::optional<double> lower;
  std::optional<double> upper;
  TransformSpec transform;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> flags;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
  bool has_flag(std::string_view flag) const;

  friend bool operator==(const IntervalRecord&, const IntervalRecord&) = default;
};

}  // namespace refint
