#include "pss/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/students_t.hpp>

namespace pss {

FrequencyTable::FrequencyTable(std::vector<std::pair<Item, Count>> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].second == 0) {
      throw std::invalid_argument("zero count for item " + std::to_string(entries_[i].first));
    }
    if (i > 0 && entries_[i].first == entries_[i - 1].first) {
      throw std::invalid_argument("duplicate item " + std::to_string(entries_[i].first));
    }
    total_ += entries_[i].second;
  }
}

Count FrequencyTable::count(Item x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const auto& e, Item v) { return e.first < v; });
  return it != entries_.end() && it->first == x ? it->second : 0;
}

FrequencyTable exact_frequencies(std::span<const Item> stream) {
  std::vector<std::pair<Item, Count>> entries;
  if (stream.empty()) return FrequencyTable();
  const Item max = *std::max_element(stream.begin(), stream.end());
  if (max < (1u << 24) && max <= 4 * stream.size()) {
    std::vector<Count> dense(std::size_t{max} + 1, 0);
    for (Item x : stream) ++dense[x];
    for (std::size_t x = 0; x < dense.size(); ++x) {
      if (dense[x] != 0) entries.emplace_back(static_cast<Item>(x), dense[x]);
    }
  } else {
    std::vector<Item> sorted(stream.begin(), stream.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      entries.emplace_back(sorted[i], j - i);
      i = j;
    }
  }
  return FrequencyTable(std::move(entries));
}

std::vector<Item> true_frequent(const FrequencyTable& table, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  const Count threshold = frequency_threshold(table.total(), k);
  std::vector<Item> out;
  for (const auto& [item, count] : table.entries()) {
    if (count >= threshold) out.push_back(item);
  }
  return out;
}

MetricsReport score(const FrequentReport& report, const FrequencyTable& table, std::uint32_t k) {
  const std::vector<Item> frequent = true_frequent(table, k);
  MetricsReport m;
  m.reported = report.entries.size();
  m.true_frequent = frequent.size();

  std::size_t hits = 0;
  double relative = 0.0;
  for (const ReportEntry& e : report.entries) {
    const Count f = table.count(e.item);
    const Count diff = f > e.est_freq ? f - e.est_freq : e.est_freq - f;
    m.total_error += diff;
    relative += f == 0 ? 1.0 : static_cast<double>(diff) / static_cast<double>(f);
    if (std::binary_search(frequent.begin(), frequent.end(), e.item)) ++hits;
  }
  if (m.reported > 0) {
    m.precision = static_cast<double>(hits) / static_cast<double>(m.reported);
    m.are = relative / static_cast<double>(m.reported);
  } else {
    m.precision = m.true_frequent == 0 ? 1.0 : 0.0;
  }
  m.recall = m.true_frequent == 0
                 ? 1.0
                 : static_cast<double>(hits) / static_cast<double>(m.true_frequent);
  return m;
}

double student_t_quantile(double probability, double nu) {
  return boost::math::quantile(boost::math::students_t(nu), probability);
}

CiSummary confidence_interval(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("confidence interval needs at least two samples");
  }
  const double m = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / m;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (m - 1.0));
  const double t = student_t_quantile(0.975, m - 1.0);
  return CiSummary{mean, t * sd / std::sqrt(m), samples.size()};
}

void write_manifest(const std::filesystem::path& path, const FrequencyTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create manifest " + path.string());
  out << "item,count\n";
  for (const auto& [item, count] : table.entries()) out << item << ',' << count << '\n';
  if (!out) throw std::runtime_error("failed writing manifest " + path.string());
}

FrequencyTable read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 10) != "item,count") {
    throw std::runtime_error(path.string() + ": missing 'item,count' header");
  }
  std::vector<std::pair<Item, Count>> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    Item item = 0;
    Count count = 0;
    const char* end = line.data() + line.size();
    bool ok = comma != std::string::npos;
    if (ok) {
      auto r1 = std::from_chars(line.data(), line.data() + comma, item);
      auto r2 = std::from_chars(line.data() + comma + 1, end, count);
      ok = r1.ec == std::errc() && r1.ptr == line.data() + comma && r2.ec == std::errc() &&
           r2.ptr == end;
    }
    if (!ok) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed manifest line '" + line + "'");
    }
    entries.emplace_back(item, count);
  }
  try {
    return FrequencyTable(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace pss
