#include <gtest/gtest.h>

#include <random>

#include "refint/errors.hpp"
#include "refint/partition.hpp"
#include "refint/synth.hpp"

namespace refint::partition {
namespace {

SummaryStats stats_of(std::size_t n, double mean, double sd) {
  SummaryStats s;
  s.n = n;
  s.mean = mean;
  s.sd = sd;
  return s;
}

TEST(HarrisBoyd, Examples) {
  const auto same = harris_boyd_z(stats_of(120, 2.0, 1.0), stats_of(120, 2.0, 1.0));
  EXPECT_EQ(same.z, 0.0);
  EXPECT_FALSE(same.partition_required);

  const auto split = harris_boyd_z(stats_of(120, 2.0, 1.0), stats_of(120, 2.5, 1.0));
  EXPECT_NEAR(split.z, 3.873, 1e-3);
  EXPECT_DOUBLE_EQ(split.z_star, 3.0);
  EXPECT_TRUE(split.partition_required);

  const auto close = harris_boyd_z(stats_of(120, 2.0, 1.0), stats_of(120, 2.1, 1.0));
  EXPECT_NEAR(close.z, 0.775, 1e-3);
  EXPECT_FALSE(close.partition_required);

  EXPECT_THROW(harris_boyd_z(stats_of(1, 2.0, 0.0), stats_of(10, 2.0, 1.0)), PreconditionError);
}

TEST(HarrisBoyd, SdRatioIsOptIn) {
  const auto a = stats_of(100, 2.0, 1.0), b = stats_of(100, 2.0, 2.0);
  EXPECT_FALSE(harris_boyd_z(a, b).partition_required);
  HarrisBoydOptions opt;
  opt.use_sd_ratio = true;
  const auto d = harris_boyd_z(a, b, opt);
  EXPECT_DOUBLE_EQ(d.sd_ratio, 2.0);
  EXPECT_TRUE(d.partition_required);
}

TEST(Cuts, Schemes) {
  EXPECT_EQ(uniform_cuts(10, 100), (std::vector<int>{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
  EXPECT_EQ(uniform_cuts(30, 100), (std::vector<int>{0, 30, 60, 90, 120}));
  const auto nu = nonuniform_cuts(100);
  ASSERT_GE(nu.size(), 17u);
  for (int i = 0; i <= 15; ++i) EXPECT_EQ(nu[i], i);
  EXPECT_EQ(nu[16], 35);
  EXPECT_GE(nu.back(), 100);
  EXPECT_THROW(uniform_cuts(0, 100), PreconditionError);
}

Cohort stepped(double step, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0, 0.5);
  Cohort c;
  for (int age = 0; age < 60; ++age) {
    for (int k = 0; k < 40; ++k) {
      const double v = 3.0 + (age >= 20 ? step : 0.0) + d(rng);
      c.observations.emplace_back("s", age, k % 2 ? Sex::male : Sex::female, std::max(v, 0.0));
    }
  }
  return c;
}

TEST(Scan, StepIsFoundAtTheBoundary) {
  ScanOptions opt;
  opt.widths = {10};
  const auto groups = scan_partitions(stepped(1.0, 3), opt);
  ASSERT_EQ(groups.size(), 1u);
  for (const auto& d : groups[0].decisions) {
    const bool straddles = d.first.ages.hi == 20 && d.second.ages.lo == 20;
    EXPECT_EQ(d.partition_required, straddles) << d.first.to_string() << " " << d.second.to_string();
  }
}

TEST(Scan, HomogeneousCohortIsQuiet) {
  ScanOptions opt;
  opt.widths = {5, 10, 20};
  std::size_t flagged = 0, total = 0;
  for (const auto& g : scan_partitions(stepped(0.0, 5), opt)) {
    flagged += g.flagged();
    total += g.decisions.size();
  }
  EXPECT_GT(total, 0u);
  EXPECT_EQ(flagged, 0u);
}

TEST(Scan, PerSexAddsSexComparisons) {
  ScanOptions opt;
  opt.widths = {20};
  opt.per_sex = true;
  const auto groups = scan_partitions(stepped(0.0, 6), opt);
  std::size_t sex = 0;
  for (const auto& d : groups[0].decisions) sex += d.kind == Comparison::sex;
  EXPECT_EQ(sex, 3u);
}

TEST(Scan, AllPairsAndNonuniform) {
  ScanOptions opt;
  opt.widths = {20};
  opt.all_pairs = true;
  opt.include_nonuniform = true;
  const auto groups = scan_partitions(stepped(0.0, 7), opt);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].decisions.size(), 3u);
  EXPECT_EQ(groups[1].scheme.name, "nonuniform");
}

TEST(Scan, IgaLikeFlagsYoungAges) {
  ScanOptions opt;
  opt.widths = {10};
  const auto cohort = synth::generate(synth::iga_profile(), 2024);
  const auto groups = scan_partitions(cohort, opt);
  ASSERT_EQ(groups.size(), 1u);
  bool young = false;
  for (const auto& d : groups[0].decisions) {
    if (d.partition_required) {
      EXPECT_LT(d.first.ages.lo, 20) << d.first.to_string() << " vs " << d.second.to_string();
      young = young || d.first.ages.lo < 20;
    }
  }
  EXPECT_TRUE(young);
}

}  // namespace
}  // namespace refint::partition
