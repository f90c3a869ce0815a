#pragma once

#include <compare>
#include <cstdint>

namespace pss {

// Stream elements are 32-bit unsigned integers; frequencies and errors are
// 64-bit so merged multi-billion item runs cannot overflow.
using Item = std::uint32_t;
using Count = std::uint64_t;

struct Counter {
  Item item = 0;
  Count est_freq = 0;
  Count err = 0;

  friend bool operator==(const Counter&, const Counter&) = default;
};

// Total order used everywhere counters are sorted: ascending by estimated
// frequency, ties broken by ascending item value.
inline bool counter_less(const Counter& a, const Counter& b) {
  if (a.est_freq != b.est_freq) return a.est_freq < b.est_freq;
  return a.item < b.item;
}

struct Estimate {
  Count est_freq = 0;
  Count err = 0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

}  // namespace pss
