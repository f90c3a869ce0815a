#include "pss/wire.hpp"

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace pss {
namespace {

constexpr char kMagic[4] = {'S', 'S', 'S', '1'};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::byte>(value & 0xffu));
    value = static_cast<T>(value >> 8);
  }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    value = static_cast<T>((value << 8) | std::to_integer<T>(bytes[offset + i]));
  }
  return value;
}

}  // namespace

std::vector<std::byte> serialize(const Summary& s) {
  const std::vector<Counter> counters = s.counters();
  std::vector<std::byte> out;
  out.reserve(kWireHeaderSize + kWireRecordSize * counters.size());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint32_t>(out, s.capacity());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(counters.size()));
  for (const Counter& c : counters) {
    put_le<std::uint32_t>(out, c.item);
    put_le<std::uint64_t>(out, c.est_freq);
    put_le<std::uint64_t>(out, c.err);
  }
  return out;
}

Summary deserialize(std::span<const std::byte> bytes) {
  if (bytes.size() < kWireHeaderSize) {
    throw std::runtime_error("summary blob shorter than header");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("summary blob has bad magic");
  }
  const auto k = get_le<std::uint32_t>(bytes, 4);
  const auto nz = get_le<std::uint32_t>(bytes, 8);
  if (bytes.size() != kWireHeaderSize + std::size_t{nz} * kWireRecordSize) {
    throw std::runtime_error("summary blob length does not match nz=" + std::to_string(nz));
  }
  if (k < 2 || nz > k) {
    throw std::runtime_error("summary blob has invalid k=" + std::to_string(k) +
                             " nz=" + std::to_string(nz));
  }
  std::vector<Counter> counters;
  counters.reserve(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    const std::size_t at = kWireHeaderSize + i * kWireRecordSize;
    Counter c{get_le<std::uint32_t>(bytes, at), get_le<std::uint64_t>(bytes, at + 4),
              get_le<std::uint64_t>(bytes, at + 12)};
    if (!counters.empty() && !counter_less(counters.back(), c)) {
      throw std::runtime_error("summary records out of order at index " + std::to_string(i));
    }
    counters.push_back(c);
  }
  try {
    return Summary::from_counters(k, counters);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid summary blob: ") + e.what());
  }
}

}  // namespace pss
