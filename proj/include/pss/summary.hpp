#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "pss/types.hpp"

namespace pss {

// Space Saving stream summary holding at most k counters.
//
// Counters live in stable slots; an indexed binary min-heap over the slots,
// keyed by (est_freq, item), gives O(log k) access to the counter that is
// evicted next, and a hash map gives O(1) expected lookup by item. When
// several counters share the minimum frequency the one with the smallest
// item is replaced.
class Summary {
 public:
  // Throws std::invalid_argument when k < 2.
  explicit Summary(std::uint32_t k);

  // Builds a summary from explicit counters. Items must be distinct, every
  // est_freq must be >= 1 and there can be at most k of them. Order of the
  // input does not matter.
  static Summary from_counters(std::uint32_t k, std::span<const Counter> counters);

  void update(Item x);

  std::uint32_t capacity() const { return k_; }
  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  bool full() const { return heap_.size() == k_; }

  // Smallest est_freq when the summary is full, 0 otherwise.
  Count min_frequency() const;

  std::optional<Estimate> estimate(Item x) const;

  // Sum of est_freq over all counters.
  Count total() const { return total_; }

  // Counters in ascending (est_freq, item) order.
  std::vector<Counter> counters() const;

  friend bool operator==(const Summary& a, const Summary& b);

 private:
  struct Slot {
    Counter counter;
    std::uint32_t heap_pos = 0;
  };

  bool slot_less(std::uint32_t a, std::uint32_t b) const {
    return counter_less(slots_[a].counter, slots_[b].counter);
  }
  void place(std::size_t pos, std::uint32_t slot);
  void sift_up(std::size_t pos);
  void sift_down(std::size_t pos);

  std::uint32_t k_;
  Count total_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> heap_;
  absl::flat_hash_map<Item, std::uint32_t> index_;
};

// Folds update over the stream, starting from an empty summary.
Summary process(std::span<const Item> stream, std::uint32_t k);

struct ReportEntry {
  Item item = 0;
  Count est_freq = 0;
  Count err = 0;
  bool guaranteed = false;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct FrequentReport {
  // Ascending (est_freq, item), same order as the summary it came from.
  std::vector<ReportEntry> entries;
  Count threshold = 0;

  friend bool operator==(const FrequentReport&, const FrequentReport&) = default;
};

// floor(n / k) + 1: an item is a k-majority element when it occurs strictly
// more than n / k times.
Count frequency_threshold(Count n, std::uint32_t k);

// Keeps the counters with est_freq >= floor(n/k) + 1. Entries whose lower
// bound est_freq - err still reaches the threshold are flagged guaranteed.
// Throws std::invalid_argument when n < 1 or k < 2.
FrequentReport prune(const Summary& s, Count n, std::uint32_t k);

}  // namespace pss
