#include "pss/wire.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.hpp"

namespace pss {
namespace {

std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int b : v) out.push_back(static_cast<std::byte>(b));
  return out;
}

TEST(WireTest, KnownEncoding) {
  const std::vector<Counter> c{{0x0102, 0x0a, 0x03}};
  const auto bytes = serialize(Summary::from_counters(3, c));
  // clang-format off
  EXPECT_EQ(bytes, bytes_of({'S', 'S', 'S', '1',
                             3, 0, 0, 0,
                             1, 0, 0, 0,
                             0x02, 0x01, 0, 0,
                             0x0a, 0, 0, 0, 0, 0, 0, 0,
                             0x03, 0, 0, 0, 0, 0, 0, 0}));
  // clang-format on
}

TEST(WireTest, EmptySummaryIsHeaderOnly) {
  const auto bytes = serialize(Summary(7));
  EXPECT_EQ(bytes.size(), kWireHeaderSize);
  EXPECT_EQ(deserialize(bytes), Summary(7));
}

TEST(WireTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t k = 2 + rng() % 40;
    const auto stream = testing::random_stream(rng, rng() % 2000, 1 + rng() % 500, trial % 2);
    const Summary s = process(stream, k);
    const auto bytes = serialize(s);
    ASSERT_EQ(bytes.size(), kWireHeaderSize + kWireRecordSize * s.size());
    const Summary back = deserialize(bytes);
    ASSERT_EQ(back, s);
    ASSERT_EQ(serialize(back), bytes);
  }
}

TEST(WireTest, LargeCountsSurvive) {
  const std::vector<Counter> c{{0xffffffffu, 0x123456789abcdefull, 0xfedcba987654321ull}};
  const Summary s = Summary::from_counters(2, c);
  EXPECT_EQ(deserialize(serialize(s)).counters(), c);
}

TEST(WireTest, RejectsMalformedInput) {
  const std::vector<Counter> c{{1, 2, 0}, {5, 9, 1}};
  const auto good = serialize(Summary::from_counters(2, c));

  auto bad_magic = good;
  bad_magic[3] = std::byte{'2'};
  EXPECT_THROW(deserialize(bad_magic), std::runtime_error);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW(deserialize(truncated), std::runtime_error);

  auto trailing = good;
  trailing.push_back(std::byte{0});
  EXPECT_THROW(deserialize(trailing), std::runtime_error);

  EXPECT_THROW(deserialize(std::span(good).first(5)), std::runtime_error);

  // Swap the two records so they are out of order.
  auto swapped = good;
  std::copy(good.begin() + 12, good.begin() + 32, swapped.begin() + 32);
  std::copy(good.begin() + 32, good.end(), swapped.begin() + 12);
  EXPECT_THROW(deserialize(swapped), std::runtime_error);

  auto over_capacity = serialize(Summary::from_counters(3, std::vector<Counter>{{1, 1, 0}, {2, 1, 0}, {3, 1, 0}}));
  over_capacity[4] = std::byte{2};
  EXPECT_THROW(deserialize(over_capacity), std::runtime_error);
}

}  // namespace
}  // namespace pss
