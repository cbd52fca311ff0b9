#include "refint/synth.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "refint/errors.hpp"

namespace refint::synth {

void SynthProfile::validate() const {
  if (family != "lognormal") throw PreconditionError("synth profile: unsupported family " + family);
  if (groups.empty()) throw PreconditionError("synth profile: no groups");
  for (const auto& g : groups) {
    if (g.ages.lo < 0 || g.ages.hi <= g.ages.lo) {
      throw PreconditionError("synth profile: invalid age range " + g.ages.label());
    }
    if (!(g.mean > 0.0) || !(g.sd > 0.0)) {
      throw PreconditionError("synth profile: mean and sd must be positive");
    }
    if (!(g.contamination_rate >= 0.0 && g.contamination_rate <= 0.1)) {
      throw PreconditionError("synth profile: contamination rate must lie in [0, 0.1]");
    }
    if (!(g.contamination_multiplier > 0.0)) {
      throw PreconditionError("synth profile: contamination multiplier must be positive");
    }
  }
}

LognormalParams moment_match(double mean, double sd) {
  if (!(mean > 0.0) || !(sd > 0.0)) throw PreconditionError("moment_match: mean, sd must be > 0");
  const double cv2 = (sd / mean) * (sd / mean);
  const double sigma2 = std::log1p(cv2);
  return {std::log(mean) - 0.5 * sigma2, std::sqrt(sigma2)};
}

SynthProfile iga_profile() {
  struct Row {
    double mean, sd, rate, multiplier;
    std::size_t count;
  };
  // Female IgA mean/SD per decade (g/L) and group sizes.
  static constexpr Row kRows[] = {
      {0.86, 0.59, 0.08, 2.5, 887},   {1.47, 0.76, 0.08, 2.5, 1158},
      {1.90, 0.92, 0.08, 2.5, 1573},  {2.03, 1.07, 0.08, 2.5, 2175},
      {2.12, 1.11, 0.08, 2.5, 3085},  {2.12, 2.03, 0.08, 2.5, 4700},
      {2.12, 2.00, 0.08, 2.5, 6787},  {2.27, 2.82, 0.08, 2.5, 7129},
      {2.33, 3.06, 0.08, 2.5, 4044},  {2.52, 2.97, 0.08, 2.5, 747},
  };
  SynthProfile p;
  p.name = "iga";
  int lo = 0;
  for (const auto& r : kRows) {
    p.groups.push_back({{lo, lo + 10}, r.mean, r.sd, r.rate, r.multiplier, r.count});
    lo += 10;
  }
  return p;
}

SynthProfile parse_profile(std::istream& in) {
  SynthProfile p;
  std::map<int, GroupProfile> groups;
  std::map<int, int> seen;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError("profile line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      p.name = value;
      continue;
    }
    if (key == "family") {
      p.family = value;
      continue;
    }
    if (key.rfind("group.", 0) != 0) fail("unknown key " + key);
    const auto dot = key.find('.', 6);
    if (dot == std::string::npos) fail("malformed group key " + key);
    int index = 0;
    try {
      index = std::stoi(key.substr(6, dot - 6));
    } catch (const std::exception&) {
      fail("malformed group index in " + key);
    }
    const std::string field = key.substr(dot + 1);
    auto& g = groups[index];
    ++seen[index];
    try {
      std::size_t used = 0;
      if (field == "age_lo") {
        g.ages.lo = std::stoi(value, &used);
      } else if (field == "age_hi") {
        g.ages.hi = std::stoi(value, &used);
      } else if (field == "mean") {
        g.mean = std::stod(value, &used);
      } else if (field == "sd") {
        g.sd = std::stod(value, &used);
      } else if (field == "contamination_rate") {
        g.contamination_rate = std::stod(value, &used);
      } else if (field == "contamination_multiplier") {
        g.contamination_multiplier = std::stod(value, &used);
      } else if (field == "count") {
        g.count = static_cast<std::size_t>(std::stoull(value, &used));
      } else {
        fail("unknown group field " + field);
      }
      if (used != value.size()) fail("trailing characters in value for " + key);
    } catch (const std::logic_error&) {
      fail("bad number for " + key);
    }
  }
  for (auto& [index, g] : groups) p.groups.push_back(g);
  p.validate();
  return p;
}

SynthProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile: " + path.string());
  return parse_profile(in);
}

void write_profile(std::ostream& out, const SynthProfile& profile) {
  const auto old = out.precision(17);
  out << "name = " << profile.name << "\n";
  out << "family = " << profile.family << "\n";
  for (std::size_t i = 0; i < profile.groups.size(); ++i) {
    const auto& g = profile.groups[i];
    const std::string k = "group." + std::to_string(i) + ".";
    out << k << "age_lo = " << g.ages.lo << "\n"
        << k << "age_hi = " << g.ages.hi << "\n"
        << k << "mean = " << g.mean << "\n"
        << k << "sd = " << g.sd << "\n"
        << k << "contamination_rate = " << g.contamination_rate << "\n"
        << k << "contamination_multiplier = " << g.contamination_multiplier << "\n"
        << k << "count = " << g.count << "\n";
  }
  out.precision(old);
}

SynthProfile resolve_profile(std::string_view name_or_path) {
  if (name_or_path == "iga") return iga_profile();
  return load_profile(std::filesystem::path(name_or_path));
}

Cohort generate(const SynthProfile& profile, std::uint64_t seed,
                std::optional<std::size_t> n_per_group) {
  profile.validate();
  Cohort cohort;
  for (std::size_t gi = 0; gi < profile.groups.size(); ++gi) {
    const auto& g = profile.groups[gi];
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(gi)};
    std::mt19937_64 rng(seq);
    const auto params = moment_match(g.mean, g.sd);
    std::uniform_int_distribution<int> age(g.ages.lo, g.ages.hi - 1);
    std::bernoulli_distribution female(0.5);
    std::bernoulli_distribution contaminated(g.contamination_rate);
    std::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t count = n_per_group.value_or(g.count);
    for (std::size_t i = 0; i < count; ++i) {
      const int a = age(rng);
      const Sex sex = female(rng) ? Sex::female : Sex::male;
      const double z = normal(rng);
      const double spread =
          contaminated(rng) ? params.sigma * g.contamination_multiplier : params.sigma;
      const double value = std::exp(params.mu + spread * z);
      cohort.observations.emplace_back("s" + std::to_string(gi) + "-" + std::to_string(i), a, sex,
                                       value);
    }
  }
  return cohort;
}

}  // namespace refint::synth
