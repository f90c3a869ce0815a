#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pss/types.hpp"

namespace pss {

enum class Family { kZipf, kHurwitz };

// Exponent applied to the rank. kRhoPlusOne gives weights x^-(rho+1)
// (zipf) and (x+a)^-(rho+1) (hurwitz); kRho drops the +1, which is how the
// skew is used by the experiment presets.
enum class SkewForm { kRhoPlusOne, kRho };

struct DistSpec {
  Family family = Family::kZipf;
  double rho = 1.0;
  double a = 0.5;  // hurwitz shift; ignored for zipf
  std::uint64_t universe = 1'000'000;
  std::uint64_t seed = 0;
  SkewForm form = SkewForm::kRhoPlusOne;
};

std::string_view to_string(Family f);
Family parse_family(std::string_view name);
std::string_view to_string(SkewForm f);
SkewForm parse_skew_form(std::string_view name);

// Throws std::invalid_argument unless rho > 0, universe in [1, 2^32) and,
// for hurwitz, a > 0.
void validate(const DistSpec& spec);

// Unnormalized weight of rank x.
double weight(const DistSpec& spec, std::uint64_t x);

// Finite-universe distribution over ranks 1..U, normalized by direct
// summation. Sampling is inverse-CDF: the smallest rank whose cumulative
// probability exceeds a uniform draw in [0, 1).
class RankDistribution {
 public:
  explicit RankDistribution(const DistSpec& spec);

  const DistSpec& spec() const { return spec_; }
  std::uint64_t universe() const { return spec_.universe; }

  // Throws std::out_of_range unless 1 <= x <= U.
  double probability(std::uint64_t x) const;

  Item sample(std::mt19937_64& engine) const;

  // n draws from an engine seeded with spec.seed. The stream for n is a
  // prefix of the stream for any larger n.
  std::vector<Item> sample_stream(std::uint64_t n) const;
  // Same draws with a different seed, reusing the tables.
  std::vector<Item> sample_stream(std::uint64_t n, std::uint64_t seed) const;

 private:
  std::uint64_t lookup(double u) const;

  DistSpec spec_;
  double norm_ = 0.0;
  std::vector<double> cdf_;
  std::vector<std::uint32_t> guide_;
};

double probability(const DistSpec& spec, std::uint64_t x);
std::vector<Item> sample_stream(const DistSpec& spec, std::uint64_t n);

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace pss
