#include "pss/summary.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.hpp"

namespace pss {
namespace {

using ::pss::testing::brute_counts;
using ::pss::testing::check_bounds;
using ::pss::testing::NaiveSpaceSaving;
using ::pss::testing::random_stream;

std::vector<Counter> C(std::initializer_list<Counter> l) { return l; }

TEST(SummaryTest, NewSummaryIsEmpty) {
  Summary s(2);
  EXPECT_EQ(s.size(), 0u);
  EXPECT_EQ(s.min_frequency(), 0u);
  EXPECT_EQ(Summary(1000).capacity(), 1000u);
  EXPECT_TRUE(Summary(1000).empty());
}

TEST(SummaryTest, RejectsCapacityBelowTwo) {
  EXPECT_THROW(Summary(1), std::invalid_argument);
  EXPECT_THROW(Summary(0), std::invalid_argument);
}

TEST(SummaryTest, FirstInsertion) {
  Summary s(2);
  s.update(5);
  EXPECT_EQ(s.counters(), C({{5, 1, 0}}));
}

TEST(SummaryTest, EvictionInheritsMinimumAsError) {
  Summary s = Summary::from_counters(2, C({{7, 3, 0}, {8, 5, 0}}));
  s.update(9);
  EXPECT_EQ(s.counters(), C({{9, 4, 3}, {8, 5, 0}}));
}

TEST(SummaryTest, HandSimulation) {
  const std::vector<Item> stream{1, 1, 2, 3};
  Summary s = process(stream, 2);
  EXPECT_EQ(s.counters(), C({{1, 2, 0}, {3, 2, 1}}));
  EXPECT_EQ(s.min_frequency(), 2u);
}

TEST(SummaryTest, EvictsSmallestItemAmongTiedMinima) {
  Summary s = Summary::from_counters(3, C({{40, 2, 0}, {10, 2, 0}, {20, 5, 0}}));
  s.update(99);
  EXPECT_FALSE(s.estimate(10).has_value());
  EXPECT_EQ(s.estimate(99), (Estimate{3, 2}));
  EXPECT_EQ(s.estimate(40), (Estimate{2, 0}));
}

TEST(SummaryTest, ProcessExamples) {
  EXPECT_TRUE(process({}, 4).empty());
  const std::vector<Item> eights{8, 8, 8};
  Summary s = process(eights, 4);
  EXPECT_EQ(s.counters(), C({{8, 3, 0}}));
  EXPECT_EQ(s.total(), 3u);
}

TEST(SummaryTest, ExactWhenCapacityCoversUniverse) {
  std::mt19937_64 rng(11);
  const auto stream = random_stream(rng, 1000, 10, false);
  const auto exact = brute_counts(stream);
  Summary s = process(stream, 10);
  for (const auto& [item, f] : exact) {
    ASSERT_EQ(s.estimate(item), (Estimate{f, 0})) << item;
  }
}

TEST(SummaryTest, MinFrequencyIsZeroUntilFull) {
  EXPECT_EQ(Summary::from_counters(2, C({{1, 2, 0}, {3, 2, 1}})).min_frequency(), 2u);
  EXPECT_EQ(Summary::from_counters(3, C({{1, 2, 0}, {3, 2, 1}})).min_frequency(), 0u);
}

TEST(SummaryTest, PointEstimate) {
  Summary s = Summary::from_counters(2, C({{9, 4, 3}}));
  EXPECT_EQ(s.estimate(9), (Estimate{4, 3}));
  EXPECT_FALSE(s.estimate(1).has_value());
}

TEST(SummaryTest, AbsentItemsBoundedByMinimum) {
  std::mt19937_64 rng(5);
  const auto stream = random_stream(rng, 1000, 300, true);
  const auto exact = brute_counts(stream);
  Summary s = process(stream, 16);
  ASSERT_TRUE(s.full());
  for (const auto& [item, f] : exact) {
    if (!s.estimate(item)) EXPECT_LE(f, s.min_frequency()) << item;
  }
}

TEST(SummaryTest, NonFullSummaryMonitorsEverySeenItem) {
  const std::vector<Item> stream{4, 4, 9, 4};
  Summary s = process(stream, 5);
  EXPECT_FALSE(s.estimate(7).has_value());
  EXPECT_EQ(brute_counts(stream).count(7), 0u);
}

TEST(SummaryTest, FromCountersValidates) {
  EXPECT_THROW(Summary::from_counters(2, C({{1, 1, 0}, {2, 1, 0}, {3, 1, 0}})),
               std::invalid_argument);
  EXPECT_THROW(Summary::from_counters(2, C({{1, 1, 0}, {1, 2, 0}})), std::invalid_argument);
  EXPECT_THROW(Summary::from_counters(2, C({{1, 0, 0}})), std::invalid_argument);
}

TEST(PruneTest, SingleGuaranteedItem) {
  Summary s = Summary::from_counters(2, C({{8, 3, 0}}));
  FrequentReport r = prune(s, 3, 2);
  EXPECT_EQ(r.threshold, 2u);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0], (ReportEntry{8, 3, 0, true}));
}

TEST(PruneTest, NothingAboveThreshold) {
  Summary s = Summary::from_counters(2, C({{1, 2, 0}, {3, 2, 1}}));
  FrequentReport r = prune(s, 4, 2);
  EXPECT_EQ(r.threshold, 3u);
  EXPECT_TRUE(r.entries.empty());
}

TEST(PruneTest, PotentialVersusGuaranteed) {
  Summary s = Summary::from_counters(4, C({{1, 10, 0}, {2, 10, 6}, {3, 2, 0}}));
  FrequentReport r = prune(s, 20, 4);  // threshold 6
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0], (ReportEntry{1, 10, 0, true}));
  EXPECT_EQ(r.entries[1], (ReportEntry{2, 10, 6, false}));  // 10 - 6 < 6
}

TEST(PruneTest, RejectsEmptyStream) {
  EXPECT_THROW(prune(Summary(2), 0, 2), std::invalid_argument);
}

TEST(PruneTest, ThresholdIsStrictlyAboveNOverK) {
  EXPECT_EQ(frequency_threshold(4, 2), 3u);
  EXPECT_EQ(frequency_threshold(5, 2), 3u);
  EXPECT_EQ(frequency_threshold(100, 7), 15u);
}

// Heap-backed summary against the linear-scan reference, plus the structural
// invariants after every single update.
TEST(SummaryPropertyTest, MatchesNaiveReference) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t k = 2 + rng() % 20;
    const std::uint32_t universe = 1 + rng() % 60;
    const auto stream = random_stream(rng, 1 + rng() % 800, universe, trial % 2 == 0);
    Summary s(k);
    NaiveSpaceSaving naive(k);
    for (Item x : stream) {
      s.update(x);
      naive.update(x);
      ASSERT_LE(s.size(), k);
    }
    ASSERT_EQ(s.counters(), naive.sorted()) << "trial " << trial;
  }
}

TEST(SummaryPropertyTest, SpaceSavingBounds) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t k = 2 + rng() % 30;
    const auto stream = random_stream(rng, rng() % 3000, 1 + rng() % 150, trial % 3 != 0);
    const auto exact = brute_counts(stream);
    Summary s = process(stream, k);
    const Count n = stream.size();
    ASSERT_EQ(s.total(), n);
    ASSERT_EQ(check_bounds(s.counters(), s.min_frequency(), exact), "") << "trial " << trial;
    ASSERT_LE(s.min_frequency(), n / k);
    if (n == 0) continue;
    const FrequentReport r = prune(s, n, k);
    for (Item f : ::pss::testing::frequent_items(exact, n, k)) {
      const bool found = std::any_of(r.entries.begin(), r.entries.end(),
                                     [&](const ReportEntry& e) { return e.item == f; });
      ASSERT_TRUE(found) << "frequent item " << f << " missing, trial " << trial;
    }
    for (const auto& e : r.entries) {
      ASSERT_GE(e.est_freq, r.threshold);
      ASSERT_EQ(e.guaranteed, e.est_freq - e.err >= r.threshold);
      if (e.guaranteed) ASSERT_GE(::pss::testing::count_of(exact, e.item), r.threshold);
    }
  }
}

}  // namespace
}  // namespace pss
