#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pss/summary.hpp"

namespace pss {

// Intermediate result of combining two summaries of capacity k. May hold up
// to 2k counters; never serialized.
struct CombinedSummary {
  std::uint32_t k = 0;
  std::vector<Counter> counters;  // ascending (est_freq, item)

  Count total() const;
};

struct MergeStats {
  Count m1 = 0;
  Count m2 = 0;
  Count delta = 0;  // m1 + m2
  std::int64_t excess = 0;  // |combined| - k, may be negative
  Count discarded_mass = 0;  // est_freq summed over the truncated counters
};

// Shared items add frequencies and errors. An item present in only one
// summary adds the other summary's minimum to both its frequency and its
// error. Throws std::invalid_argument when capacities differ.
CombinedSummary combine(const Summary& s1, const Summary& s2, Count m1, Count m2);

// One reduction step: combine with m_i = min_frequency(s_i), then keep the k
// counters with the largest (est_freq, item).
std::pair<Summary, MergeStats> merge_step(const Summary& s1, const Summary& s2,
                                          std::uint32_t k);

// Baseline (Agarwal et al.) path. A full summary has its minimum subtracted
// from every frequency; counters that reach zero are dropped, errors are left
// untouched. The result holds at most k - 1 counters.
Summary agarwal_normalize(const Summary& s, std::uint32_t k);

// Sums shared frequencies, keeps unshared ones as they are, and when more
// than k - 1 counters remain subtracts the frequency of the counter at the
// cut from the survivors. Both inputs must hold at most k - 1 counters.
Summary agarwal_merge_step(const Summary& s1, const Summary& s2, std::uint32_t k);

}  // namespace pss
