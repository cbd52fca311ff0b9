#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refint/model.hpp"

namespace refint::synth {

inline constexpr std::string_view kRngAlgorithm =
    "std::mt19937_64 per age group, seeded by std::seed_seq{seed_lo, seed_hi, group}";

struct GroupProfile {
  AgeRange ages;
  double mean = 1.0;  // target mean of the base lognormal (g/L)
  double sd = 1.0;    // target SD of the base lognormal (g/L)
  double contamination_rate = 0.0;        // fraction of heavy-tail draws, in [0, 0.1]
  double contamination_multiplier = 1.0;  // heavy-tail draws widen the log-scale spread by this
  std::size_t count = 0;

  friend bool operator==(const GroupProfile&, const GroupProfile&) = default;
};

struct SynthProfile {
  std::string name;
  std::string family = "lognormal";
  std::vector<GroupProfile> groups;

  void validate() const;

  friend bool operator==(const SynthProfile&, const SynthProfile&) = default;
};

struct LognormalParams {
  double mu = 0.0;
  double sigma = 0.0;
};

// Solves mean = exp(mu + sigma^2/2), sd^2 = (exp(sigma^2) - 1) exp(2 mu + sigma^2).
LognormalParams moment_match(double mean, double sd);

// IgA-like age structure: ten decades with female serum IgA moments as
// base moments and realistic group sizes.
SynthProfile iga_profile();

// Key-value text format, one `key = value` per line, '#' comments:
//   name = iga
//   family = lognormal
//   group.0.age_lo = 0
//   group.0.age_hi = 10
//   group.0.mean = 0.86
//   group.0.sd = 0.59
//   group.0.contamination_rate = 0.08
//   group.0.contamination_multiplier = 2.5
//   group.0.count = 887
SynthProfile parse_profile(std::istream& in);
SynthProfile load_profile(const std::filesystem::path& path);
void write_profile(std::ostream& out, const SynthProfile& profile);

// Resolves "iga" to the built-in profile, anything else to a profile file.
SynthProfile resolve_profile(std::string_view name_or_path);

// Deterministic for a given (profile, seed). Each group draws from its own
// sub-stream, so changing one group's count leaves the others untouched.
// n_per_group overrides every group's count.
Cohort generate(const SynthProfile& profile, std::uint64_t seed,
                std::optional<std::size_t> n_per_group = std::nullopt);

}  // namespace refint::synth
