#include "pss/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"

namespace pss {
namespace {

DistSpec zipf(double rho, std::uint64_t u, SkewForm form = SkewForm::kRhoPlusOne) {
  DistSpec s;
  s.rho = rho;
  s.universe = u;
  s.form = form;
  return s;
}

TEST(DatagenTest, SingletonUniverse) {
  const RankDistribution d(zipf(2.0, 1));
  EXPECT_DOUBLE_EQ(d.probability(1), 1.0);
  for (Item x : d.sample_stream(100)) EXPECT_EQ(x, 1u);
}

TEST(DatagenTest, SmallZipfByHand) {
  // weights 1, 1/4, 1/9 sum to 49/36
  const RankDistribution d(zipf(1.0, 3));
  EXPECT_NEAR(d.probability(1), 36.0 / 49.0, 1e-15);
  EXPECT_NEAR(d.probability(2), 9.0 / 49.0, 1e-15);
  EXPECT_NEAR(d.probability(3), 4.0 / 49.0, 1e-15);
  // exponent rho: 1, 1/2, 1/3 sum to 11/6
  const RankDistribution r(zipf(1.0, 3, SkewForm::kRho));
  EXPECT_NEAR(r.probability(1), 6.0 / 11.0, 1e-15);
}

TEST(DatagenTest, HurwitzWithTinyShiftIsZipf) {
  DistSpec h = zipf(1.5, 1000);
  h.family = Family::kHurwitz;
  h.a = 1e-9;
  const RankDistribution hd(h), zd(zipf(1.5, 1000));
  for (std::uint64_t x : {1ull, 2ull, 10ull, 500ull, 1000ull}) {
    EXPECT_NEAR(hd.probability(x), zd.probability(x), 1e-6);
  }
}

TEST(DatagenTest, ProbabilitiesSumToOneAndDecrease) {
  for (Family f : {Family::kZipf, Family::kHurwitz}) {
    for (double rho : {0.5, 1.0, 3.0}) {
      DistSpec s = zipf(rho, 20000);
      s.family = f;
      const RankDistribution d(s);
      double sum = 0.0, prev = 2.0;
      for (std::uint64_t x = 1; x <= s.universe; ++x) {
        const double p = d.probability(x);
        ASSERT_LT(p, prev);
        prev = p;
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_NEAR(probability(s, 7), d.probability(7), 1e-15);
    }
  }
}

TEST(DatagenTest, StreamsAreDeterministic) {
  DistSpec s = zipf(1.0, 5000);
  s.seed = 42;
  EXPECT_TRUE(sample_stream(s, 0).empty());
  const auto a = sample_stream(s, 10000);
  EXPECT_EQ(a, sample_stream(s, 10000));
  const auto longer = sample_stream(s, 12000);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), longer.begin()));
  s.seed = 43;
  EXPECT_NE(a, sample_stream(s, 10000));
  for (Item x : a) {
    ASSERT_GE(x, 1u);
    ASSERT_LE(x, 5000u);
  }
  const RankDistribution d(s);
  EXPECT_EQ(d.sample_stream(500, 42), std::vector<Item>(a.begin(), a.begin() + 500));
}

TEST(DatagenTest, RankOneFrequencyWithinThreeSigma) {
  DistSpec s = zipf(1.5, 10000);
  s.seed = 9;
  const RankDistribution d(s);
  const std::uint64_t n = 1'000'000;
  const auto stream = d.sample_stream(n);
  const double p = d.probability(1);
  const double hits = static_cast<double>(std::count(stream.begin(), stream.end(), 1u));
  EXPECT_LT(std::abs(hits - n * p), 3.0 * std::sqrt(n * p * (1 - p)));
}

// Inverse-CDF draws must match a plain binary search over a CDF built
// independently in the test.
TEST(DatagenTest, SamplesMatchIndependentInverseCdf) {
  for (std::uint64_t u : {1ull, 2ull, 37ull, 100000ull}) {
    DistSpec s = zipf(0.7, u, SkewForm::kRho);
    s.seed = u;
    std::vector<double> w(u);
    for (std::uint64_t x = 1; x <= u; ++x) w[x - 1] = std::pow(static_cast<double>(x), -0.7);
    long double total = 0;
    for (std::uint64_t i = u; i-- > 0;) total += w[i];
    std::vector<double> cdf(u);
    long double acc = 0;
    for (std::uint64_t i = 0; i < u; ++i) {
      acc += w[i];
      cdf[i] = static_cast<double>(acc / total);
    }
    cdf.back() = 1.0;

    const RankDistribution d(s);
    std::mt19937_64 a(u), b(u);
    int mismatches = 0;
    for (int i = 0; i < 20000; ++i) {
      const double r = uniform_unit(b);
      const auto expected = std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin() + 1;
      if (d.sample(a) != static_cast<Item>(expected)) ++mismatches;
    }
    // the two CDFs are summed differently, so a draw landing within an ulp
    // of a boundary may legitimately differ
    EXPECT_LE(mismatches, 2) << "U=" << u;
  }
}

TEST(DatagenTest, Validation) {
  EXPECT_THROW(validate(zipf(0.0, 10)), std::invalid_argument);
  EXPECT_THROW(validate(zipf(-1.0, 10)), std::invalid_argument);
  EXPECT_THROW(validate(zipf(1.0, 0)), std::invalid_argument);
  EXPECT_THROW(validate(zipf(1.0, 1ull << 32)), std::invalid_argument);
  DistSpec h = zipf(1.0, 10);
  h.family = Family::kHurwitz;
  h.a = 0.0;
  EXPECT_THROW(RankDistribution{h}, std::invalid_argument);
  h.a = 0.5;
  EXPECT_NO_THROW(RankDistribution{h});
  EXPECT_THROW(RankDistribution(zipf(1.0, 10)).probability(11), std::out_of_range);
  EXPECT_THROW(RankDistribution(zipf(1.0, 10)).probability(0), std::out_of_range);
}

TEST(DatagenTest, NamesRoundTrip) {
  EXPECT_EQ(parse_family("hurwitz"), Family::kHurwitz);
  EXPECT_EQ(to_string(Family::kZipf), "zipf");
  EXPECT_EQ(parse_skew_form("rho"), SkewForm::kRho);
  EXPECT_EQ(to_string(SkewForm::kRhoPlusOne), "rho+1");
  EXPECT_THROW(parse_family("pareto"), std::invalid_argument);
  EXPECT_THROW(parse_skew_form("rho+2"), std::invalid_argument);
}

}  // namespace
}  // namespace pss
