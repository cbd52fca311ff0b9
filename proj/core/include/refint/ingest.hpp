#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "refint/model.hpp"

namespace refint {

// Maps the engine's fields onto header names in the input.
struct ColumnSchema {
  std::string age = "age";
  std::string sex = "sex";
  std::string value = "value";
  std::optional<std::string> id;
  // When set, unrecognised sex codes are excluded as bad_sex_code instead of
  // being kept as unknown.
  bool strict_sex = false;
};

// Reads a header row followed by data rows. Rows that cannot become an
// Observation land in the exclusion log; input order is preserved. Blank
// lines are ignored and do not count as rows.
//
// Throws InputError if the stream is unreadable, a configured column is
// missing from the header, or no row survives.
Cohort parse_cohort(std::istream& source, const ColumnSchema& schema, char delimiter = ',');
Cohort read_cohort_file(const std::filesystem::path& path, const ColumnSchema& schema,
                        char delimiter = ',');

struct ExclusionRules {
  // Observations with age >= max_age are excluded. nullopt disables the cut.
  std::optional<int> max_age = 100;
};

Cohort apply_exclusions(Cohort cohort, const ExclusionRules& rules = {});

// Writes the cohort back out in the layout parse_cohort reads
// (id,age,sex,value).
void write_cohort_csv(std::ostream& out, const Cohort& cohort);

}  // namespace refint
