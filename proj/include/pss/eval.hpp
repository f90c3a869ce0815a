#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "pss/summary.hpp"

namespace pss {

// Exact item counts of a stream, sorted by item.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  // Entries need not be sorted; duplicate items and zero counts are
  // rejected with std::invalid_argument.
  explicit FrequencyTable(std::vector<std::pair<Item, Count>> entries);

  Count count(Item x) const;
  Count total() const { return total_; }
  std::size_t distinct() const { return entries_.size(); }
  const std::vector<std::pair<Item, Count>>& entries() const { return entries_; }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::vector<std::pair<Item, Count>> entries_;
  Count total_ = 0;
};

FrequencyTable exact_frequencies(std::span<const Item> stream);

// Items whose exact count is at least floor(n/k) + 1, ascending.
std::vector<Item> true_frequent(const FrequencyTable& table, std::uint32_t k);

struct MetricsReport {
  Count total_error = 0;
  double precision = 0.0;
  double recall = 0.0;
  double are = 0.0;
  std::size_t reported = 0;
  std::size_t true_frequent = 0;
};

// Precision is 1 when nothing is reported and nothing is frequent, 0 when
// nothing is reported but frequent items exist. Recall is 1 when there are
// no frequent items. A reported item that never occurred contributes a
// relative error of 1.
MetricsReport score(const FrequentReport& report, const FrequencyTable& table, std::uint32_t k);

struct CiSummary {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t runs = 0;
};

// Two-sided 95% Student-t interval. Throws std::invalid_argument for fewer
// than two samples.
CiSummary confidence_interval(std::span<const double> samples);

// Quantile of the Student t distribution with nu degrees of freedom.
double student_t_quantile(double probability, double nu);

// Manifest CSV: "item,count" header then one line per item, ascending.
void write_manifest(const std::filesystem::path& path, const FrequencyTable& table);
FrequencyTable read_manifest(const std::filesystem::path& path);

}  // namespace pss
