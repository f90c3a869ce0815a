#include "pss/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pss {

std::string_view to_string(Family f) { return f == Family::kZipf ? "zipf" : "hurwitz"; }

Family parse_family(std::string_view name) {
  if (name == "zipf") return Family::kZipf;
  if (name == "hurwitz") return Family::kHurwitz;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string_view to_string(SkewForm f) { return f == SkewForm::kRho ? "rho" : "rho+1"; }

SkewForm parse_skew_form(std::string_view name) {
  if (name == "rho") return SkewForm::kRho;
  if (name == "rho+1") return SkewForm::kRhoPlusOne;
  throw std::invalid_argument("unknown skew form '" + std::string(name) + "'");
}

void validate(const DistSpec& spec) {
  if (!(spec.rho > 0.0) || !std::isfinite(spec.rho)) {
    throw std::invalid_argument("rho must be a positive real");
  }
  if (spec.family == Family::kHurwitz && (!(spec.a > 0.0) || !std::isfinite(spec.a))) {
    throw std::invalid_argument("hurwitz shift a must be a positive real");
  }
  if (spec.universe < 1) throw std::invalid_argument("universe must hold at least one item");
  if (spec.universe > std::numeric_limits<Item>::max()) {
    throw std::invalid_argument("universe " + std::to_string(spec.universe) +
                                " exceeds the 32-bit item range");
  }
}

double weight(const DistSpec& spec, std::uint64_t x) {
  const double exponent = spec.form == SkewForm::kRho ? spec.rho : spec.rho + 1.0;
  const double base = static_cast<double>(x) + (spec.family == Family::kHurwitz ? spec.a : 0.0);
  return std::pow(base, -exponent);
}

RankDistribution::RankDistribution(const DistSpec& spec) : spec_(spec) {
  validate(spec_);
  const std::uint64_t u = spec_.universe;
  cdf_.resize(u);
  // Weights are decreasing: sum smallest first, with compensation.
  double sum = 0.0, carry = 0.0;
  for (std::uint64_t x = u; x >= 1; --x) {
    const double y = weight(spec_, x) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  norm_ = sum;
  sum = 0.0;
  carry = 0.0;
  for (std::uint64_t x = 1; x <= u; ++x) {
    const double y = weight(spec_, x) / norm_ - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    cdf_[x - 1] = sum;
  }
  cdf_.back() = 1.0;

  // guide_[j] is the first index whose cdf exceeds j / G.
  const std::size_t buckets = static_cast<std::size_t>(std::min<std::uint64_t>(u, 1u << 22));
  guide_.resize(buckets);
  std::size_t i = 0;
  for (std::size_t j = 0; j < buckets; ++j) {
    const double edge = static_cast<double>(j) / static_cast<double>(buckets);
    while (cdf_[i] <= edge) ++i;
    guide_[j] = static_cast<std::uint32_t>(i);
  }
}

double RankDistribution::probability(std::uint64_t x) const {
  if (x < 1 || x > spec_.universe) {
    throw std::out_of_range("rank " + std::to_string(x) + " outside 1.." +
                            std::to_string(spec_.universe));
  }
  return weight(spec_, x) / norm_;
}

std::uint64_t RankDistribution::lookup(double u) const {
  const auto bucket = static_cast<std::size_t>(u * static_cast<double>(guide_.size()));
  std::size_t i = guide_[std::min(bucket, guide_.size() - 1)];
  // u * G can round across a bucket edge; walk to the exact answer.
  while (i > 0 && cdf_[i - 1] > u) --i;
  while (cdf_[i] <= u) ++i;
  return i + 1;
}

Item RankDistribution::sample(std::mt19937_64& engine) const {
  return static_cast<Item>(lookup(uniform_unit(engine)));
}

std::vector<Item> RankDistribution::sample_stream(std::uint64_t n) const {
  return sample_stream(n, spec_.seed);
}

std::vector<Item> RankDistribution::sample_stream(std::uint64_t n, std::uint64_t seed) const {
  std::mt19937_64 engine(seed);
  std::vector<Item> out(n);
  for (auto& x : out) x = sample(engine);
  return out;
}

double probability(const DistSpec& spec, std::uint64_t x) {
  validate(spec);
  if (x < 1 || x > spec.universe) {
    throw std::out_of_range("rank " + std::to_string(x) + " outside 1.." +
                            std::to_string(spec.universe));
  }
  double sum = 0.0, carry = 0.0;
  for (std::uint64_t y = spec.universe; y >= 1; --y) {
    const double term = weight(spec, y) - carry;
    const double t = sum + term;
    carry = (t - sum) - term;
    sum = t;
  }
  return weight(spec, x) / sum;
}

std::vector<Item> sample_stream(const DistSpec& spec, std::uint64_t n) {
  return RankDistribution(spec).sample_stream(n);
}

}  // namespace pss
