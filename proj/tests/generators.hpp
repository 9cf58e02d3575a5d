#pragma once

// Small hand-rolled generators for the property tests. Each property test draws its cases
// from an Rng seeded per case, so a failure message names the case that broke.

#include <cmath>
#include <cstdint>
#include <vector>

#include "qh/domains.hpp"
#include "qh/normed_space.hpp"
#include "qh/random.hpp"

namespace qh::testing {

inline constexpr double kExponents[] = {1.0, 1.5, 2.0, 3.0, kInf};

inline NormSpec any_space(Rng& rng, int min_dim = 2, int max_dim = 4) {
  const int dim = min_dim + static_cast<int>(rng.index(static_cast<std::size_t>(max_dim - min_dim + 1)));
  return NormSpec(dim, kExponents[rng.index(5)]);
}

inline Vector any_vector(Rng& rng, std::size_t dim, double scale = 1.0) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

/// Point strictly inside the ball of `space` around `center`, at norm radius below `radius`.
inline Vector point_in_ball(const NormSpec& space, Rng& rng, const Vector& center, double radius) {
  for (;;) {
    Vector v = any_vector(rng, center.dim(), radius);
    if (norm(space, v) < radius) return center + v;
  }
}

inline Domain unit_ball(const NormSpec& space, PunctureSet punctures = {}) {
  return Domain(space, Ball{Vector(static_cast<std::size_t>(space.dim())), 1.0}, std::move(punctures));
}

/// {x : x_last > 0}.
inline Domain upper_half_space(const NormSpec& space) {
  Vector normal(static_cast<std::size_t>(space.dim()));
  normal[normal.dim() - 1] = -1.0;
  return Domain(space, HalfSpace{normal, 0.0});
}

inline Vector axis_point(std::size_t dim, std::size_t axis, double value) {
  Vector v(dim);
  v[axis] = value;
  return v;
}

/// Euclidean hyperbolic distance in the upper half-plane, which is k for that domain.
inline double half_plane_k(const Vector& a, const Vector& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * a[1] * b[1]));
}

}  // namespace qh::testing
