#include "qh/random.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "qh/error.hpp"

namespace qh {

namespace {
constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double Rng::log_uniform(double lo, double hi) noexcept {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::size_t Rng::index(std::size_t n) noexcept {
  const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

double Rng::normal() noexcept {
  // Box-Muller on (0,1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector Rng::direction(std::size_t dim) noexcept {
  Vector v(dim);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] = normal();
      sq += v[i] * v[i];
    }
  } while (sq < 1e-24);
  const double inv = 1.0 / std::sqrt(sq);
  for (std::size_t i = 0; i < dim; ++i) v[i] *= inv;
  return v;
}

double radical_inverse(std::uint64_t index, unsigned base) noexcept {
  const double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

HaltonSequence::HaltonSequence(std::size_t dim, std::uint64_t seed) : shift_(dim) {
  if (dim == 0 || dim > kPrimes.size()) throw InvalidArgument("Halton dimension out of range");
  Rng rng(seed);
  for (double& s : shift_) s = rng.uniform();
}

void HaltonSequence::point(std::uint64_t index, double* out) const noexcept {
  for (std::size_t d = 0; d < shift_.size(); ++d) {
    double u = radical_inverse(index + 1, kPrimes[d]) + shift_[d];
    out[d] = u >= 1.0 ? u - 1.0 : u;
  }
}

}  // namespace qh
