#include "refint/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include "refint/errors.hpp"

namespace refint {

namespace {

std::string upper_case(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string lower_case(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Sex sex) noexcept {
  switch (sex) {
    case Sex::female: return "F";
    case Sex::male: return "M";
    case Sex::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(SexFilter filter) noexcept {
  switch (filter) {
    case SexFilter::female: return "F";
    case SexFilter::male: return "M";
    case SexFilter::both: return "both";
  }
  return "both";
}

std::string_view to_string(Elimination elimination) noexcept {
  switch (elimination) {
    case Elimination::none: return "none";
    case Elimination::tukey: return "tukey";
    case Elimination::block_dr: return "block_dr";
  }
  return "none";
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::parametric: return "parametric";
    case Method::nonparametric: return "nonparametric";
    case Method::robust: return "robust";
  }
  return "parametric";
}

std::string_view to_string(ExclusionReason reason) noexcept {
  switch (reason) {
    case ExclusionReason::missing_age: return "missing_age";
    case ExclusionReason::missing_value: return "missing_value";
    case ExclusionReason::non_numeric: return "non_numeric";
    case ExclusionReason::negative_value: return "negative_value";
    case ExclusionReason::age_cutoff: return "age_cutoff";
    case ExclusionReason::bad_sex_code: return "bad_sex_code";
  }
  return "non_numeric";
}

std::string_view to_string(Tail tail) noexcept {
  return tail == Tail::low ? "low" : "high";
}

std::optional<SexFilter> parse_sex_filter(std::string_view text) {
  const auto key = lower_case(text);
  if (key == "f" || key == "female") return SexFilter::female;
  if (key == "m" || key == "male") return SexFilter::male;
  if (key == "both") return SexFilter::both;
  return std::nullopt;
}

std::optional<Elimination> parse_elimination(std::string_view text) {
  const auto key = lower_case(text);
  if (key == "none") return Elimination::none;
  if (key == "tukey") return Elimination::tukey;
  if (key == "block_dr" || key == "dr") return Elimination::block_dr;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view text) {
  const auto key = lower_case(text);
  if (key == "parametric" || key == "para") return Method::parametric;
  if (key == "nonparametric" || key == "nonpara") return Method::nonparametric;
  if (key == "robust") return Method::robust;
  return std::nullopt;
}

std::optional<ExclusionReason> parse_exclusion_reason(std::string_view text) {
  for (auto r : {ExclusionReason::missing_age, ExclusionReason::missing_value,
                 ExclusionReason::non_numeric, ExclusionReason::negative_value,
                 ExclusionReason::age_cutoff, ExclusionReason::bad_sex_code}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

Sex parse_sex_code(std::string_view text) noexcept {
  const auto key = upper_case(text);
  if (key == "F" || key == "FEMALE") return Sex::female;
  if (key == "M" || key == "MALE") return Sex::male;
  return Sex::unknown;
}

bool matches(SexFilter filter, Sex sex) noexcept {
  switch (filter) {
    case SexFilter::both: return true;
    case SexFilter::female: return sex == Sex::female;
    case SexFilter::male: return sex == Sex::male;
  }
  return false;
}

Observation::Observation(std::string subject_id, int age, Sex sex, double value)
    : subject_id_(std::move(subject_id)), age_(age), sex_(sex), value_(value) {
  if (age_ < 0) throw PreconditionError("observation age must be non-negative");
  if (!std::isfinite(value_) || value_ < 0.0) {
    throw PreconditionError("observation value must be finite and non-negative");
  }
}

std::string AgeRange::label() const {
  return std::to_string(lo) + "-" + std::to_string(hi);
}

std::string SegmentLabel::to_string() const {
  if (sex == SexFilter::both) return ages.label();
  return ages.label() + "/" + std::string(refint::to_string(sex));
}

Segment make_segment(const Cohort& cohort, const SegmentLabel& label) {
  Segment segment{label, {}};
  for (const auto& obs : cohort.observations) {
    if (label.ages.contains(obs.age()) && matches(label.sex, obs.sex())) {
      segment.values.push_back(obs.value());
    }
  }
  return segment;
}

void TransformSpec::validate() const {
  if (!applied && (lambda1 != 1.0 || lambda2 != 0.0)) {
    throw PreconditionError("unapplied transform must carry lambda1 = 1, lambda2 = 0");
  }
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda1)) {
    throw PreconditionError("transform parameters out of range");
  }
}

EliminationResult::EliminationResult(Elimination procedure, std::vector<double> retained,
                                     std::vector<double> eliminated_low,
                                     std::vector<double> eliminated_high)
    : procedure_(procedure),
      retained_(std::move(retained)),
      low_(std::move(eliminated_low)),
      high_(std::move(eliminated_high)) {
  std::sort(retained_.begin(), retained_.end());
  std::sort(low_.begin(), low_.end());
  std::sort(high_.begin(), high_.end());
  if (!retained_.empty()) {
    if (!low_.empty() && !(low_.back() < retained_.front())) {
      throw PreconditionError("low eliminations must lie strictly below retained values");
    }
    if (!high_.empty() && !(retained_.back() < high_.front())) {
      throw PreconditionError("high eliminations must lie strictly above retained values");
    }
  } else if (!low_.empty() && !high_.empty() && !(low_.back() < high_.front())) {
    throw PreconditionError("eliminated tails overlap");
  }
}

bool IntervalRecord::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

}  // namespace refint
