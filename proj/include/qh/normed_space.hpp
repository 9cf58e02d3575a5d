#pragma once

// Finite-dimensional p-normed spaces: vectors, norms, polylines and norm circles
// inside two-dimensional linear subspaces.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace qh {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : coords_(dim, 0.0) {}
  Vector(std::initializer_list<double> coords) : coords_(coords) {}
  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) {}
  explicit Vector(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const double* data() const noexcept { return coords_.data(); }
  double* data() noexcept { return coords_.data(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

/// Euclidean inner product (used for plane bases and half-space normals).
double dot(const Vector& a, const Vector& b);

/// The i-th standard basis vector of R^dim.
Vector unit_vector(std::size_t dim, std::size_t axis);

/// R^dim with the p-norm, 1 <= p <= inf. p = kInf is the max norm.
class NormSpec {
 public:
  NormSpec(int dim, double p);

  static NormSpec euclidean(int dim) { return NormSpec(dim, 2.0); }

  int dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }
  bool is_max() const noexcept { return kind_ == Kind::Max; }

  /// Conjugate exponent q with 1/p + 1/q = 1.
  double dual_p() const noexcept;

  /// Unchecked kernels; callers guarantee the span length equals dim().
  double norm_of(std::span<const double> v) const noexcept;
  double distance_of(const double* a, const double* b) const noexcept;
  double dual_norm_of(std::span<const double> v) const noexcept;

  /// Smallest c with |x|_p >= c |x|_2 for every x.
  double euclidean_lower_ratio() const noexcept;

  friend bool operator==(const NormSpec& a, const NormSpec& b) noexcept {
    return a.dim_ == b.dim_ && a.p_ == b.p_;
  }

 private:
  enum class Kind { L1, L2, Max, General };
  int dim_;
  double p_;
  Kind kind_;
};

/// Checked p-norm: throws DimensionError when v does not conform to space.
double norm(const NormSpec& space, const Vector& v);

/// |a - b| without temporaries.
double distance(const NormSpec& space, const Vector& a, const Vector& b);

/// (1 - s) z1 + s z2 for s in [0, 1].
Vector segment_point(const Vector& z1, const Vector& z2, double s);

/// Piecewise-linear arc: at least two vertices, consecutive vertices distinct.
class Polyline {
 public:
  explicit Polyline(std::vector<Vector> vertices);

  static Polyline segment(const Vector& a, const Vector& b) { return Polyline({a, b}); }

  const std::vector<Vector>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return vertices_.size() - 1; }
  const Vector& front() const { return vertices_.front(); }
  const Vector& back() const { return vertices_.back(); }
  std::size_t dim() const noexcept { return vertices_.front().dim(); }

  Polyline reversed() const;
  /// Vertices first..last inclusive; requires last > first.
  Polyline subpath(std::size_t first, std::size_t last) const;

 private:
  std::vector<Vector> vertices_;
};

/// Joins a and b; a.back() must equal b.front().
Polyline concat(const Polyline& a, const Polyline& b);

double polyline_length(const NormSpec& space, const Polyline& poly);

/// Spanning pair of a two-dimensional linear subspace.
class PlaneBasis {
 public:
  PlaneBasis(Vector b1, Vector b2);

  static PlaneBasis standard(std::size_t dim) { return {unit_vector(dim, 0), unit_vector(dim, 1)}; }

  const Vector& b1() const noexcept { return b1_; }
  const Vector& b2() const noexcept { return b2_; }

  /// cos(theta) b1 + sin(theta) b2.
  Vector direction(double theta) const;

 private:
  Vector b1_;
  Vector b2_;
};

/// Point of the norm sphere S(center, radius) in the affine plane center + T,
/// reached by central projection of the Euclidean parameterization.
Vector sphere_circle_point(const NormSpec& space, const Vector& center, double radius,
                           const PlaneBasis& plane, double theta);

enum class ArcSpan { Minor, Major };

/// Polyline with resolution + 1 vertices on the circle between two parameter angles.
/// With ArcSpan::Minor the angular separation must not exceed pi (a half circle is allowed).
Polyline minor_arc(const NormSpec& space, const Vector& center, double radius,
                   const PlaneBasis& plane, double theta1, double theta2, int resolution,
                   ArcSpan span = ArcSpan::Minor);

/// Least c such that the polyline is c-quasiconvex at vertex resolution.
double quasiconvexity_constant(const NormSpec& space, const Polyline& poly);

}  // namespace qh
