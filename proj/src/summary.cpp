#include "pss/summary.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pss {

Summary::Summary(std::uint32_t k) : k_(k) {
  if (k < 2) {
    throw std::invalid_argument("summary capacity must be at least 2, got " +
                                std::to_string(k));
  }
  // Capacity is a hint only; huge k values should not allocate up front.
  const std::size_t reserve = std::min<std::size_t>(k, 1u << 16);
  slots_.reserve(reserve);
  heap_.reserve(reserve);
  index_.reserve(reserve);
}

Summary Summary::from_counters(std::uint32_t k, std::span<const Counter> counters) {
  Summary s(k);
  if (counters.size() > k) {
    throw std::invalid_argument("summary holds " + std::to_string(counters.size()) +
                                " counters but capacity is " + std::to_string(k));
  }
  for (const Counter& c : counters) {
    if (c.est_freq == 0) {
      throw std::invalid_argument("counter for item " + std::to_string(c.item) +
                                  " has zero frequency");
    }
    const auto slot = static_cast<std::uint32_t>(s.slots_.size());
    if (!s.index_.emplace(c.item, slot).second) {
      throw std::invalid_argument("duplicate item " + std::to_string(c.item));
    }
    s.slots_.push_back(Slot{c, 0});
    s.heap_.push_back(slot);
    s.slots_[slot].heap_pos = static_cast<std::uint32_t>(s.heap_.size() - 1);
    s.sift_up(s.heap_.size() - 1);
    s.total_ += c.est_freq;
  }
  return s;
}

void Summary::place(std::size_t pos, std::uint32_t slot) {
  heap_[pos] = slot;
  slots_[slot].heap_pos = static_cast<std::uint32_t>(pos);
}

void Summary::sift_up(std::size_t pos) {
  const std::uint32_t moving = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!slot_less(moving, heap_[parent])) break;
    place(pos, heap_[parent]);
    pos = parent;
  }
  place(pos, moving);
}

void Summary::sift_down(std::size_t pos) {
  const std::uint32_t moving = heap_[pos];
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && slot_less(heap_[child + 1], heap_[child])) ++child;
    if (!slot_less(heap_[child], moving)) break;
    place(pos, heap_[child]);
    pos = child;
  }
  place(pos, moving);
}

void Summary::update(Item x) {
  ++total_;
  if (auto it = index_.find(x); it != index_.end()) {
    Slot& slot = slots_[it->second];
    ++slot.counter.est_freq;
    sift_down(slot.heap_pos);
    return;
  }
  if (heap_.size() < k_) {
    const auto slot = static_cast<std::uint32_t>(slots_.size());
    slots_.push_back(Slot{Counter{x, 1, 0}, 0});
    index_.emplace(x, slot);
    heap_.push_back(slot);
    sift_up(heap_.size() - 1);
    return;
  }
  // Replace the minimum counter: the newcomer inherits its count as error.
  const std::uint32_t root = heap_.front();
  Counter& victim = slots_[root].counter;
  index_.erase(victim.item);
  index_.emplace(x, root);
  victim = Counter{x, victim.est_freq + 1, victim.est_freq};
  sift_down(0);
}

Count Summary::min_frequency() const {
  if (!full()) return 0;
  return slots_[heap_.front()].counter.est_freq;
}

std::optional<Estimate> Summary::estimate(Item x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  const Counter& c = slots_[it->second].counter;
  return Estimate{c.est_freq, c.err};
}

std::vector<Counter> Summary::counters() const {
  std::vector<Counter> out;
  out.reserve(slots_.size());
  for (const Slot& s : slots_) out.push_back(s.counter);
  std::sort(out.begin(), out.end(), counter_less);
  return out;
}

bool operator==(const Summary& a, const Summary& b) {
  return a.k_ == b.k_ && a.total_ == b.total_ && a.counters() == b.counters();
}

Summary process(std::span<const Item> stream, std::uint32_t k) {
  Summary s(k);
  for (Item x : stream) s.update(x);
  return s;
}

Count frequency_threshold(Count n, std::uint32_t k) {
  return n / k + 1;
}

FrequentReport prune(const Summary& s, Count n, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (n < 1) throw std::invalid_argument("stream length must be at least 1");
  FrequentReport report;
  report.threshold = frequency_threshold(n, k);
  for (const Counter& c : s.counters()) {
    if (c.est_freq < report.threshold) continue;
    const bool guaranteed = c.err <= c.est_freq && c.est_freq - c.err >= report.threshold;
    report.entries.push_back(ReportEntry{c.item, c.est_freq, c.err, guaranteed});
  }
  return report;
}

}  // namespace pss
