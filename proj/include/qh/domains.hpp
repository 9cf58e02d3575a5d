#pragma once

// Base domains D (ball, half-space, whole space) and punctured domains G = D \ P.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qh/normed_space.hpp"

namespace qh {

/// Open norm ball {x : |x - center| < radius}.
struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Open half-space {x : normal . x < offset}.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

struct WholeSpace {};

using BaseDomain = std::variant<Ball, HalfSpace, WholeSpace>;

/// Finite puncture set with its separation level (1/2 unless stated otherwise).
struct PunctureSet {
  std::vector<Vector> points;
  double kappa = 0.5;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }
};

enum class Membership { Inside, Near, Outside };

struct PunctureHit {
  double distance;
  std::size_t index;
};

class Domain {
 public:
  Domain(NormSpec space, BaseDomain base, PunctureSet punctures = {});

  const NormSpec& space() const noexcept { return space_; }
  const BaseDomain& base() const noexcept { return base_; }
  const PunctureSet& punctures() const noexcept { return punctures_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(space_.dim()); }
  bool has_punctures() const noexcept { return !punctures_.empty(); }
  bool is_whole_space() const noexcept { return std::holds_alternative<WholeSpace>(base_); }

  /// The unpunctured domain D. Throws for a whole-space base (d_D would be undefined).
  Domain base_domain() const;
  Domain with_punctures(PunctureSet punctures) const;

  /// Signed distance to the base boundary, positive inside; +inf for the whole space.
  double base_clearance(std::span<const double> x) const noexcept;
  /// min(base clearance, distance to the nearest puncture). Unchecked hot path.
  double clearance(std::span<const double> x) const noexcept;
  double clearance(const Vector& x) const noexcept { return clearance(x.coords()); }
  /// Nearest puncture, lowest index on ties. Requires a nonempty puncture set.
  PunctureHit nearest_puncture(std::span<const double> x) const noexcept;

  /// Same d_G on the ball B(center, radius) with the punctures that cannot realize it removed.
  Domain localized(const Vector& center, double radius) const;

  /// Point at base clearance `delta` along the inward normal through x, when one exists.
  std::optional<Vector> inward_offset(const Vector& x, double delta) const;

  /// Characteristic length used by samplers (ball radius, 1 otherwise).
  double scale() const noexcept;

  /// Throws DimensionError unless x conforms to the space.
  void require_conforms(const Vector& x) const;

 private:
  NormSpec space_;
  BaseDomain base_;
  PunctureSet punctures_;
  std::vector<double> flat_;    // puncture coordinates, row-major
  double normal_dual_ = 1.0;    // dual norm of the half-space normal
};

/// d_D(x): distance from x to the boundary of the base domain. x must be strictly inside.
double dist_boundary_base(const Domain& domain, const Vector& x);

/// Distance to the nearest puncture and its index (lowest index on ties).
PunctureHit dist_puncture(const Domain& domain, const Vector& x);

/// d_G(x) = min(d_D(x), distance to P). x must lie in G.
double d_G(const Domain& domain, const Vector& x);

inline constexpr double kDefaultMembershipTol = 1e-9;

Membership contains(const Domain& domain, const Vector& x, double tol = kDefaultMembershipTol);

/// 1 - exp(-sigma / 2), the ball-radius fraction matched to separation level sigma.
double lambda_sigma(double sigma);

/// 1 - exp(-1/4).
double lambda_zero();

/// Number of punctures in the open ball B(x, lambda d_D(x)).
std::size_t ball_puncture_count(const Domain& domain, const Vector& x, double lambda);

}  // namespace qh
