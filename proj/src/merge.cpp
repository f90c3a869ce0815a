#include "pss/merge.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pss {
namespace {

void require_capacity(const Summary& s1, const Summary& s2, std::uint32_t k) {
  if (s1.capacity() != k || s2.capacity() != k) {
    throw std::invalid_argument("cannot merge summaries with capacities " +
                                std::to_string(s1.capacity()) + " and " +
                                std::to_string(s2.capacity()) + " at k=" + std::to_string(k));
  }
}

bool item_less(const Counter& a, const Counter& b) { return a.item < b.item; }

// Walks both summaries in item order. `shared` receives matching pairs,
// `only1` / `only2` the counters present on one side only.
template <typename Shared, typename Only1, typename Only2>
void join_by_item(const Summary& s1, const Summary& s2, Shared shared, Only1 only1,
                  Only2 only2) {
  std::vector<Counter> a = s1.counters();
  std::vector<Counter> b = s2.counters();
  std::sort(a.begin(), a.end(), item_less);
  std::sort(b.begin(), b.end(), item_less);
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->item < j->item)) {
      only1(*i++);
    } else if (i == a.end() || j->item < i->item) {
      only2(*j++);
    } else {
      shared(*i++, *j++);
    }
  }
}

}  // namespace

Count CombinedSummary::total() const {
  Count sum = 0;
  for (const Counter& c : counters) sum += c.est_freq;
  return sum;
}

CombinedSummary combine(const Summary& s1, const Summary& s2, Count m1, Count m2) {
  require_capacity(s1, s2, s1.capacity());
  CombinedSummary out;
  out.k = s1.capacity();
  out.counters.reserve(s1.size() + s2.size());
  join_by_item(
      s1, s2,
      [&](const Counter& a, const Counter& b) {
        out.counters.push_back(Counter{a.item, a.est_freq + b.est_freq, a.err + b.err});
      },
      [&](const Counter& a) {
        out.counters.push_back(Counter{a.item, a.est_freq + m2, a.err + m2});
      },
      [&](const Counter& b) {
        out.counters.push_back(Counter{b.item, b.est_freq + m1, b.err + m1});
      });
  std::sort(out.counters.begin(), out.counters.end(), counter_less);
  return out;
}

std::pair<Summary, MergeStats> merge_step(const Summary& s1, const Summary& s2,
                                          std::uint32_t k) {
  require_capacity(s1, s2, k);
  MergeStats stats;
  stats.m1 = s1.min_frequency();
  stats.m2 = s2.min_frequency();
  stats.delta = stats.m1 + stats.m2;

  CombinedSummary combined = combine(s1, s2, stats.m1, stats.m2);
  stats.excess = static_cast<std::int64_t>(combined.counters.size()) - k;
  auto keep_from = combined.counters.begin();
  if (stats.excess > 0) {
    keep_from += stats.excess;
    for (auto it = combined.counters.begin(); it != keep_from; ++it) {
      stats.discarded_mass += it->est_freq;
    }
  }
  std::span<const Counter> kept(keep_from, combined.counters.end());
  return {Summary::from_counters(k, kept), stats};
}

Summary agarwal_normalize(const Summary& s, std::uint32_t k) {
  if (s.capacity() != k) {
    throw std::invalid_argument("summary capacity " + std::to_string(s.capacity()) +
                                " does not match k=" + std::to_string(k));
  }
  if (!s.full()) return s;
  const Count m = s.min_frequency();
  std::vector<Counter> kept;
  kept.reserve(k);
  for (const Counter& c : s.counters()) {
    if (c.est_freq > m) kept.push_back(Counter{c.item, c.est_freq - m, c.err});
  }
  return Summary::from_counters(k, kept);
}

Summary agarwal_merge_step(const Summary& s1, const Summary& s2, std::uint32_t k) {
  require_capacity(s1, s2, k);
  if (s1.size() > k - 1 || s2.size() > k - 1) {
    throw std::invalid_argument("agarwal merge expects normalized inputs with at most k-1 counters");
  }
  std::vector<Counter> combined;
  combined.reserve(s1.size() + s2.size());
  join_by_item(
      s1, s2,
      [&](const Counter& a, const Counter& b) {
        combined.push_back(Counter{a.item, a.est_freq + b.est_freq, a.err + b.err});
      },
      [&](const Counter& a) { combined.push_back(a); },
      [&](const Counter& b) { combined.push_back(b); });
  std::sort(combined.begin(), combined.end(), counter_less);
  if (combined.size() <= k - 1) return Summary::from_counters(k, combined);

  const std::size_t excess = combined.size() - k + 1;
  const Count cut = combined[excess - 1].est_freq;
  std::vector<Counter> kept;
  kept.reserve(k - 1);
  for (std::size_t i = excess; i < combined.size(); ++i) {
    const Counter& c = combined[i];
    if (c.est_freq > cut) kept.push_back(Counter{c.item, c.est_freq - cut, c.err});
  }
  return Summary::from_counters(k, kept);
}

}  // namespace pss
