#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pss/summary.hpp"

namespace pss {

// Little-endian summary encoding shared by the reduction transport and the
// CLI:
//
//   "SSS1" | k: u32 | nz: u32 | nz x (item: u32, est_freq: u64, err: u64)
//
// Records are written in ascending (est_freq, item) order.
inline constexpr std::size_t kWireHeaderSize = 12;
inline constexpr std::size_t kWireRecordSize = 20;

std::vector<std::byte> serialize(const Summary& s);

// Throws std::runtime_error on a bad magic, truncated or trailing bytes,
// records out of order, duplicate items, nz > k or zero frequencies.
Summary deserialize(std::span<const std::byte> bytes);

}  // namespace pss
