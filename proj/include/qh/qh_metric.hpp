#pragma once

// Quasihyperbolic lengths, the distance-ratio metric, and two-sided brackets for the
// quasihyperbolic distance k(z1, z2) of a (punctured) domain.
//
// Every function uses the domain's own boundary distance: d_G when punctures are
// present, d_D otherwise.

#include <cstdint>
#include <optional>

#include "qh/domains.hpp"
#include "qh/normed_space.hpp"

namespace qh {

struct QuadratureParams {
  double rel_tol = 1e-8;
  int max_depth = 40;

  void validate() const;
};

/// Sampling graph controls. The initial multiscale sample holds at most node_budget nodes;
/// every refinement round adds at most node_budget / 4 more, so a run with more rounds
/// extends (never replaces) the node set of a run with fewer.
struct GraphParams {
  std::size_t node_budget = 2000;
  int ring_levels = 12;
  int refine_rounds = 3;
  double target_ratio = 1.05;
  std::uint64_t seed = 0;
  int ring_points = 16;

  void validate() const;
};

struct QhLength {
  double value = 0.0;
  double error = 0.0;
  /// value + error: the figure used wherever an upper bound is required.
  double upper() const noexcept { return value + error; }
};

/// True iff the closed segment [a, b] is certified to lie in G: it is split until every
/// piece of length h has endpoint clearances c0, c1 with c0 + c1 > h, which by the
/// 1-Lipschitz property keeps the clearance positive along the piece.
bool segment_inside(const Domain& domain, const Vector& a, const Vector& b);

/// Integral of |dz| / d(z) along the polyline, by adaptive Simpson halving per edge.
/// Throws GeometryError when an edge is not certified inside, QuadratureError when
/// max_depth is exceeded.
QhLength qh_length(const Domain& domain, const Polyline& poly, const QuadratureParams& quad = {});

/// log(1 + |z1 - z2| / min(d(z1), d(z2))).
double j_metric(const Domain& domain, const Vector& z1, const Vector& z2);

/// max(j, |log(d(z1) / d(z2))|), a certified lower bound for k.
double k_lower(const Domain& domain, const Vector& z1, const Vector& z2);

/// Smallest of the ball estimate log(1 + L / (d - L)) (either endpoint, when L < d) and the
/// certified length of the straight segment; nullopt when neither applies.
std::optional<double> k_upper_direct(const Domain& domain, const Vector& z1, const Vector& z2,
                                     const QuadratureParams& quad = {});

struct DistanceBracket {
  double lower = 0.0;
  double upper = kInf;  // kInf when no connecting path was found
  std::optional<Polyline> witness;

  bool bounded() const noexcept { return upper < kInf; }
  double ratio() const noexcept;
};

/// lower = k_lower; upper = min(k_upper_direct, best certified path of a refinable
/// multiscale sampling graph). Symmetric and deterministic for a fixed seed.
DistanceBracket k_bracket(const Domain& domain, const Vector& z1, const Vector& z2,
                          const GraphParams& graph = {}, const QuadratureParams& quad = {});

struct NearGeodesicResult {
  Polyline path;
  double global_ratio = kInf;
  double worst_subarc_ratio = kInf;
  bool certified = false;
  DistanceBracket bracket;
};

/// Best witness path, certified as a nu-neargeodesic at vertex resolution against k_lower.
/// throws GeometryError if no path connects the points within budget.
NearGeodesicResult near_geodesic(const Domain& domain, const Vector& z1, const Vector& z2, double nu,
                                 const GraphParams& graph = {}, const QuadratureParams& quad = {});

struct LogInequalitySlacks {
  double lower_form = 0.0;   // r / (1 - r/2)
  double middle = 0.0;       // log 1/(1 - r)
  double upper_form = 0.0;   // r / (1 - r)
  double left_slack = 0.0;   // middle - lower_form
  double right_slack = 0.0;  // upper_form - middle
  bool holds = false;
};

/// r/(1 - r/2) <= log 1/(1 - r) <= r/(1 - r) for 0 <= r < 1.
LogInequalitySlacks logine_check(double r);

}  // namespace qh
