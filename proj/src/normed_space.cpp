#include "qh/normed_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qh/error.hpp"

namespace qh {

namespace {

void require_same_dim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("vector dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

void require_conforms(const NormSpec& space, const Vector& v) {
  if (v.dim() != static_cast<std::size_t>(space.dim())) {
    throw DimensionError("vector of dimension " + std::to_string(v.dim()) +
                         " in a space of dimension " + std::to_string(space.dim()));
  }
}

// |x|^p; integer and half-integer exponents avoid pow.
double abs_pow(double x, double p, int whole, bool half) noexcept {
  if (whole < 0) return std::pow(x, p);
  double r = 1.0;
  for (int k = 0; k < whole; ++k) r *= x;
  return half ? r * std::sqrt(x) : r;
}

double root_p(double s, double p) noexcept {
  if (p == 3.0) return std::cbrt(s);
  if (p == 1.5) {
    const double c = std::cbrt(s);
    return c * c;
  }
  return std::pow(s, 1.0 / p);
}

double general_p_norm(std::span<const double> v, double p) noexcept {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return 0.0;
  const double twice = 2.0 * p;
  const bool exact = twice == std::floor(twice) && p <= 16.0;
  const int whole = exact ? static_cast<int>(std::floor(p)) : -1;
  const bool half = exact && p != std::floor(p);
  double sum = 0.0;
  for (double x : v) sum += abs_pow(std::abs(x) / peak, p, whole, half);
  return peak * root_p(sum, p);
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : coords_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

Vector unit_vector(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw InvalidArgument("axis out of range");
  Vector e(dim);
  e[axis] = 1.0;
  return e;
}

NormSpec::NormSpec(int dim, double p) : dim_(dim), p_(p), kind_(Kind::General) {
  if (dim < 2) throw InvalidArgument("dimension must be at least 2");
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must satisfy p >= 1");
  if (p == 1.0) {
    kind_ = Kind::L1;
  } else if (p == 2.0) {
    kind_ = Kind::L2;
  } else if (std::isinf(p)) {
    kind_ = Kind::Max;
  }
}

double NormSpec::dual_p() const noexcept {
  switch (kind_) {
    case Kind::L1: return kInf;
    case Kind::Max: return 1.0;
    case Kind::L2: return 2.0;
    case Kind::General: break;
  }
  return p_ / (p_ - 1.0);
}

double NormSpec::norm_of(std::span<const double> v) const noexcept {
  switch (kind_) {
    case Kind::L1: {
      double sum = 0.0;
      for (double x : v) sum += std::abs(x);
      return sum;
    }
    case Kind::L2: {
      if (v.size() == 2) return std::hypot(v[0], v[1]);
      double sum = 0.0;
      for (double x : v) sum += x * x;
      return std::sqrt(sum);
    }
    case Kind::Max: {
      double peak = 0.0;
      for (double x : v) peak = std::max(peak, std::abs(x));
      return peak;
    }
    case Kind::General: break;
  }
  return general_p_norm(v, p_);
}

double NormSpec::distance_of(const double* a, const double* b) const noexcept {
  double diff[16];
  if (dim_ <= 16) {
    for (int i = 0; i < dim_; ++i) diff[i] = a[i] - b[i];
    return norm_of(std::span<const double>(diff, static_cast<std::size_t>(dim_)));
  }
  std::vector<double> big(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) big[static_cast<std::size_t>(i)] = a[i] - b[i];
  return norm_of(big);
}

double NormSpec::dual_norm_of(std::span<const double> v) const noexcept {
  switch (kind_) {
    case Kind::L1: {
      double peak = 0.0;
      for (double x : v) peak = std::max(peak, std::abs(x));
      return peak;
    }
    case Kind::Max: {
      double sum = 0.0;
      for (double x : v) sum += std::abs(x);
      return sum;
    }
    case Kind::L2: {
      double sum = 0.0;
      for (double x : v) sum += x * x;
      return std::sqrt(sum);
    }
    case Kind::General: break;
  }
  return general_p_norm(v, dual_p());
}

double NormSpec::euclidean_lower_ratio() const noexcept {
  if (kind_ == Kind::L1 || kind_ == Kind::L2 || (kind_ == Kind::General && p_ < 2.0)) return 1.0;
  const double inv_p = is_max() ? 0.0 : 1.0 / p_;
  return std::pow(static_cast<double>(dim_), inv_p - 0.5);
}

double norm(const NormSpec& space, const Vector& v) {
  require_conforms(space, v);
  return space.norm_of(v.coords());
}

double distance(const NormSpec& space, const Vector& a, const Vector& b) {
  require_conforms(space, a);
  require_conforms(space, b);
  return space.distance_of(a.data(), b.data());
}

Vector segment_point(const Vector& z1, const Vector& z2, double s) {
  require_same_dim(z1, z2);
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("segment parameter outside [0, 1]");
  if (s == 0.0) return z1;
  if (s == 1.0) return z2;
  Vector out(z1.dim());
  for (std::size_t i = 0; i < z1.dim(); ++i) out[i] = (1.0 - s) * z1[i] + s * z2[i];
  return out;
}

Polyline::Polyline(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw InvalidArgument("a polyline needs at least two vertices");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    require_same_dim(vertices_[0], vertices_[i]);
    if (vertices_[i] == vertices_[i - 1]) {
      throw InvalidArgument("polyline has coincident consecutive vertices at index " +
                            std::to_string(i));
    }
  }
}

Polyline Polyline::reversed() const {
  std::vector<Vector> rev(vertices_.rbegin(), vertices_.rend());
  return Polyline(std::move(rev));
}

Polyline Polyline::subpath(std::size_t first, std::size_t last) const {
  if (!(first < last && last < vertices_.size())) throw InvalidArgument("bad subpath range");
  return Polyline(std::vector<Vector>(vertices_.begin() + static_cast<std::ptrdiff_t>(first),
                                      vertices_.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

Polyline concat(const Polyline& a, const Polyline& b) {
  if (!(a.back() == b.front())) throw InvalidArgument("concat: arcs do not share an endpoint");
  std::vector<Vector> all = a.vertices();
  all.insert(all.end(), b.vertices().begin() + 1, b.vertices().end());
  return Polyline(std::move(all));
}

double polyline_length(const NormSpec& space, const Polyline& poly) {
  double total = 0.0;
  const auto& v = poly.vertices();
  for (std::size_t i = 1; i < v.size(); ++i) total += distance(space, v[i - 1], v[i]);
  return total;
}

PlaneBasis::PlaneBasis(Vector b1, Vector b2) : b1_(std::move(b1)), b2_(std::move(b2)) {
  require_same_dim(b1_, b2_);
  const double g11 = dot(b1_, b1_);
  const double g22 = dot(b2_, b2_);
  const double g12 = dot(b1_, b2_);
  const double gram = g11 * g22 - g12 * g12;
  if (!(g11 > 0.0 && g22 > 0.0) || !(gram > 1e-12 * g11 * g22)) {
    throw InvalidArgument("plane basis vectors are not linearly independent");
  }
}

Vector PlaneBasis::direction(double theta) const {
  Vector u(b1_.dim());
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (std::size_t i = 0; i < u.dim(); ++i) u[i] = c * b1_[i] + s * b2_[i];
  return u;
}

Vector sphere_circle_point(const NormSpec& space, const Vector& center, double radius,
                           const PlaneBasis& plane, double theta) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  require_conforms(space, center);
  require_conforms(space, plane.b1());
  const Vector u = plane.direction(theta);
  const double len = space.norm_of(u.coords());
  if (!(len > 0.0)) throw InvalidArgument("degenerate plane direction");
  Vector out = center;
  for (std::size_t i = 0; i < out.dim(); ++i) out[i] += radius * u[i] / len;
  return out;
}

Polyline minor_arc(const NormSpec& space, const Vector& center, double radius,
                   const PlaneBasis& plane, double theta1, double theta2, int resolution,
                   ArcSpan span) {
  if (resolution < 2) throw InvalidArgument("arc resolution must be at least 2");
  const double sweep = theta2 - theta1;
  if (sweep == 0.0) throw InvalidArgument("arc endpoints coincide");
  if (span == ArcSpan::Minor && std::abs(sweep) > std::numbers::pi) {
    throw InvalidArgument("angular separation exceeds pi; request ArcSpan::Major explicitly");
  }
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int k = 0; k <= resolution; ++k) {
    const double theta = k == resolution ? theta2 : theta1 + sweep * k / resolution;
    pts.push_back(sphere_circle_point(space, center, radius, plane, theta));
  }
  return Polyline(std::move(pts));
}

double quasiconvexity_constant(const NormSpec& space, const Polyline& poly) {
  const std::size_t n = poly.size();
  const std::size_t dim = poly.dim();
  if (dim != static_cast<std::size_t>(space.dim())) {
    throw DimensionError("polyline does not conform to the space");
  }
  std::vector<double> flat(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(poly.vertices()[i].data(), poly.vertices()[i].data() + dim, flat.data() + i * dim);
  }
  std::vector<double> prefix(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    prefix[i] = prefix[i - 1] + space.distance_of(&flat[(i - 1) * dim], &flat[i * dim]);
  }

  // Moving j forward by an arc length delta raises the arc by delta and lowers the chord by at
  // most delta, so every j' within (best chord - arc) / (1 + best) of j is skipped exactly.
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double* vi = &flat[i * dim];
    std::size_t j = i + 1;
    while (j < n) {
      const double arc = prefix[j] - prefix[i];
      const double chord = space.distance_of(vi, &flat[j * dim]);
      if (chord > 0.0) best = std::max(best, arc / chord);
      const double gap = (best * chord - arc) / (1.0 + best) * (1.0 - 1e-12);
      if (gap > 0.0) {
        const auto next = std::upper_bound(prefix.begin() + static_cast<std::ptrdiff_t>(j + 1), prefix.end(),
                                           prefix[j] + gap);
        j = static_cast<std::size_t>(next - prefix.begin());
      } else {
        ++j;
      }
    }
  }
  if (best == 0.0) throw InvalidArgument("polyline has no pair of distinct vertices");
  return std::max(best, 1.0);
}

}  // namespace qh
