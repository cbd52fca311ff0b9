#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "refint/errors.hpp"
#include "refint/stats.hpp"

namespace refint::stats {
namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0, 1);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

std::vector<double> exponential(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> d(1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// Fraction of 100 Gaussian samples the test accepts.
template <typename Test>
double gaussian_acceptance(std::size_t n, Test test) {
  int accepted = 0;
  for (int s = 0; s < 100; ++s) {
    accepted += test(oracle::gaussian(n, 3.0, 2.0, 1000 + s)).reject_normality ? 0 : 1;
  }
  return accepted / 100.0;
}

TEST(AndersonDarling, CalibratedOnGaussian) {
  EXPECT_GE(gaussian_acceptance(1000, [](const auto& x) { return anderson_darling_normal(x); }),
            0.9);
}

TEST(AndersonDarling, RejectsUniform) {
  for (int s = 0; s < 10; ++s) {
    const auto r = anderson_darling_normal(uniform(500, s));
    EXPECT_TRUE(r.reject_normality);
    ASSERT_TRUE(r.p_value.has_value());
    EXPECT_LT(*r.p_value, 0.05);
  }
}

TEST(AndersonDarling, Preconditions) {
  EXPECT_THROW(anderson_darling_normal(std::vector<double>{1, 2, 3, 4, 5}), PreconditionError);
}

TEST(Lilliefors, CalibratedOnGaussian) {
  EXPECT_GE(gaussian_acceptance(1000, [](const auto& x) { return ks_lilliefors_normal(x); }), 0.9);
}

TEST(Lilliefors, RejectsExponential) {
  for (int s = 0; s < 10; ++s) EXPECT_TRUE(ks_lilliefors_normal(exponential(500, s)).reject_normality);
}

TEST(Lilliefors, CriticalValues) {
  const auto big = ks_lilliefors_normal(oracle::gaussian(400, 0, 1, 1));
  ASSERT_TRUE(big.critical_value.has_value());
  EXPECT_NEAR(*big.critical_value, 0.886 / 20.0, 1e-12);
  EXPECT_FALSE(big.p_value.has_value());
  const auto loose = ks_lilliefors_normal(oracle::gaussian(400, 0, 1, 1), 0.20);
  EXPECT_LT(*loose.critical_value, *big.critical_value);
  EXPECT_THROW(ks_lilliefors_normal(std::vector<double>{1, 2, 3, 4, 5}), PreconditionError);
}

TEST(Skewness, SymmetricDataIsNotRejected) {
  std::vector<double> x;
  for (int r = 0; r < 20; ++r) {
    for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) x.push_back(v);
  }
  for (auto variant : {SkewTest::dagostino, SkewTest::large_sample}) {
    const auto t = skewness_test(x, 0.05, variant);
    EXPECT_NEAR(t.statistic, 0.0, 1e-9);
    EXPECT_FALSE(t.reject_normality);
  }
}

TEST(Skewness, RejectsLognormal) {
  for (int s = 0; s < 10; ++s) {
    const auto x = oracle::lognormal(1000, 0, 0.8, s);
    EXPECT_TRUE(skewness_test(x).reject_normality);
    EXPECT_TRUE(skewness_test(x, 0.05, SkewTest::large_sample).reject_normality);
  }
}

TEST(Skewness, Preconditions) {
  EXPECT_THROW(skewness_test(oracle::gaussian(10, 0, 1, 1)), PreconditionError);
}

TEST(Gate, GaussianMostlyNormalLognormalNot) {
  // Three tests at 5% each: roughly 86% of Gaussian samples pass all of them.
  int normal = 0;
  for (int s = 0; s < 200; ++s) normal += is_normal(oracle::gaussian(2000, 5, 1, 50 + s)) ? 1 : 0;
  EXPECT_GE(normal, 160);
  for (int s = 0; s < 10; ++s) EXPECT_FALSE(is_normal(oracle::lognormal(2000, 0, 0.5, s)));
}

TEST(Gate, AnyFailingTestRejects) {
  // Mild skew: AD and KS typically pass, the skewness test does not.
  for (int s = 0; s < 200; ++s) {
    const auto x = oracle::lognormal(300, 0, 0.25, 900 + s);
    const auto rep = normality_tests(x);
    if (!rep.anderson_darling.reject_normality && !rep.kolmogorov_smirnov.reject_normality &&
        rep.skewness.reject_normality) {
      EXPECT_FALSE(rep.normal);
      EXPECT_FALSE(is_normal(x));
      return;
    }
  }
  GTEST_FAIL() << "no sample passed AD and KS while failing the skewness test";
}

}  // namespace
}  // namespace refint::stats
