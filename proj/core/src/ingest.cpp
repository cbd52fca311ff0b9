#include "refint/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "refint/errors.hpp"

namespace refint {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one line. Double quotes group a field and "" escapes a quote.
std::vector<std::string> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

std::optional<int> parse_age(std::string_view text) {
  int age = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, age);
  if (ec != std::errc{} || ptr != end || age < 0) return std::nullopt;
  return age;
}

std::optional<double> parse_value(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError("configured column '" + name + "' not found in header");
}

}  // namespace

Cohort parse_cohort(std::istream& source, const ColumnSchema& schema, char delimiter) {
  if (!source) throw InputError("input stream is not readable");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(source, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (!trim(line).empty()) {
      header = split_fields(line, delimiter);
      break;
    }
  }
  if (header.empty()) throw InputError("input has no header row");

  const auto age_col = column_index(header, schema.age);
  const auto sex_col = column_index(header, schema.sex);
  const auto value_col = column_index(header, schema.value);
  std::optional<std::size_t> id_col;
  if (schema.id) id_col = column_index(header, *schema.id);

  Cohort cohort;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, delimiter);
    auto field = [&](std::size_t col) -> std::string_view {
      return col < fields.size() ? std::string_view(fields[col]) : std::string_view{};
    };
    auto exclude = [&](ExclusionReason reason) {
      cohort.exclusion_log.push_back({line_no, std::string(trim(line)), reason});
    };

    const auto age_text = field(age_col);
    if (age_text.empty()) {
      exclude(ExclusionReason::missing_age);
      continue;
    }
    const auto age = parse_age(age_text);
    if (!age) {
      exclude(ExclusionReason::non_numeric);
      continue;
    }
    const auto value_text = field(value_col);
    if (value_text.empty()) {
      exclude(ExclusionReason::missing_value);
      continue;
    }
    const auto value = parse_value(value_text);
    if (!value) {
      exclude(ExclusionReason::non_numeric);
      continue;
    }
    if (*value < 0.0) {
      exclude(ExclusionReason::negative_value);
      continue;
    }
    const Sex sex = parse_sex_code(field(sex_col));
    if (sex == Sex::unknown && schema.strict_sex) {
      exclude(ExclusionReason::bad_sex_code);
      continue;
    }
    std::string id = id_col ? std::string(field(*id_col)) : "row" + std::to_string(line_no);
    cohort.observations.emplace_back(std::move(id), *age, sex, *value);
  }
  if (source.bad()) throw InputError("error while reading input stream");
  if (cohort.observations.empty()) throw InputError("no valid rows in input");
  return cohort;
}

Cohort read_cohort_file(const std::filesystem::path& path, const ColumnSchema& schema,
                        char delimiter) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path.string());
  return parse_cohort(in, schema, delimiter);
}

Cohort apply_exclusions(Cohort cohort, const ExclusionRules& rules) {
  if (!rules.max_age) return cohort;
  Cohort out;
  out.exclusion_log = std::move(cohort.exclusion_log);
  out.observations.reserve(cohort.observations.size());
  for (auto& obs : cohort.observations) {
    if (obs.age() >= *rules.max_age) {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, obs.value());
      std::string raw = obs.subject_id() + "," + std::to_string(obs.age()) + "," +
                        std::string(to_string(obs.sex())) + "," + std::string(buf, res.ptr);
      out.exclusion_log.push_back({0, std::move(raw), ExclusionReason::age_cutoff});
    } else {
      out.observations.push_back(std::move(obs));
    }
  }
  return out;
}

void write_cohort_csv(std::ostream& out, const Cohort& cohort) {
  out << "id,age,sex,value\n";
  const auto old_precision = out.precision(17);
  for (const auto& obs : cohort.observations) {
    out << obs.subject_id() << ',' << obs.age() << ',' << to_string(obs.sex()) << ','
        << obs.value() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace refint
