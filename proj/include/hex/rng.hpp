#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hex {

// Seeded random stream. Every stochastic component owns one of these so that
// sub-results can be reproduced from the root seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  // Derives an independent stream for a named component.
  Rng fork(std::string_view stream) const;
  Rng fork(std::uint64_t stream) const;

  double uniform() { return unit_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
  double normal(double mean = 0.0, double stddev = 1.0);
  // Uniform index in [0, n).
  std::size_t index(std::size_t n);
  std::vector<std::size_t> permutation(std::size_t n);

  std::mt19937_64& engine() { return engine_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace hex
