#pragma once

// Deterministic randomness: splitmix-derived seeds, a bit-exact uniform generator,
// and a rotated Halton sequence for low-discrepancy sampling.

#include <cstdint>
#include <random>
#include <vector>

#include "qh/normed_space.hpp"

namespace qh {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the index-th independent stream below a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// mt19937_64 with hand-rolled conversions, so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) noexcept;
  std::size_t index(std::size_t n) noexcept;
  /// Euclidean-uniform direction in R^dim.
  Vector direction(std::size_t dim) noexcept;
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
};

/// Radical inverse of index in the given prime base.
double radical_inverse(std::uint64_t index, unsigned base) noexcept;

/// Halton points in [0,1)^dim with a Cranley-Patterson shift drawn from the seed.
class HaltonSequence {
 public:
  HaltonSequence(std::size_t dim, std::uint64_t seed);
  /// Writes point `index` into out (size dim).
  void point(std::uint64_t index, double* out) const noexcept;
  std::size_t dim() const noexcept { return shift_.size(); }

 private:
  std::vector<double> shift_;
};

}  // namespace qh
