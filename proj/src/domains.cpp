#include "qh/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qh/error.hpp"

namespace qh {

Domain::Domain(NormSpec space, BaseDomain base, PunctureSet punctures)
    : space_(space), base_(std::move(base)), punctures_(std::move(punctures)) {
  const std::size_t n = dim();
  if (const auto* ball = std::get_if<Ball>(&base_)) {
    if (ball->center.dim() != n) throw DimensionError("ball center does not conform to the space");
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius)) {
      throw InvalidArgument("ball radius must be positive and finite");
    }
  } else if (const auto* half = std::get_if<HalfSpace>(&base_)) {
    if (half->normal.dim() != n) throw DimensionError("half-space normal does not conform to the space");
    normal_dual_ = space_.dual_norm_of(half->normal.coords());
    if (!(normal_dual_ > 0.0)) throw InvalidArgument("half-space normal must be nonzero");
  } else if (punctures_.empty()) {
    throw InvalidArgument("a whole-space base needs a nonempty puncture set");
  }
  if (!(punctures_.kappa > 0.0)) throw InvalidArgument("separation level kappa must be positive");

  flat_.reserve(punctures_.size() * n);
  for (std::size_t i = 0; i < punctures_.size(); ++i) {
    const Vector& x = punctures_.points[i];
    if (x.dim() != n) throw DimensionError("puncture " + std::to_string(i) + " does not conform");
    if (!(base_clearance(x.coords()) > 0.0)) {
      throw GeometryError("puncture " + std::to_string(i) + " is not strictly inside the base domain");
    }
    flat_.insert(flat_.end(), x.data(), x.data() + n);
  }
  std::vector<std::size_t> order(punctures_.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& pts = punctures_.points;
  auto lex = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(pts[a].data(), pts[a].data() + n, pts[b].data(),
                                        pts[b].data() + n);
  };
  std::sort(order.begin(), order.end(), lex);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (pts[order[k]] == pts[order[k - 1]]) throw InvalidArgument("puncture points must be pairwise distinct");
  }
}

void Domain::require_conforms(const Vector& x) const {
  if (x.dim() != dim()) {
    throw DimensionError("point of dimension " + std::to_string(x.dim()) + " in a domain of dimension " +
                         std::to_string(dim()));
  }
}

Domain Domain::base_domain() const {
  if (is_whole_space()) throw InvalidArgument("the whole space has no boundary distance");
  return Domain(space_, base_);
}

Domain Domain::with_punctures(PunctureSet punctures) const {
  return Domain(space_, base_, std::move(punctures));
}

double Domain::base_clearance(std::span<const double> x) const noexcept {
  if (const auto* ball = std::get_if<Ball>(&base_)) {
    return ball->radius - space_.distance_of(x.data(), ball->center.data());
  }
  if (const auto* half = std::get_if<HalfSpace>(&base_)) {
    double ax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ax += half->normal[i] * x[i];
    return (half->offset - ax) / normal_dual_;
  }
  return kInf;
}

PunctureHit Domain::nearest_puncture(std::span<const double> x) const noexcept {
  const std::size_t n = dim();
  PunctureHit best{kInf, 0};
  for (std::size_t i = 0; i < punctures_.size(); ++i) {
    const double d = space_.distance_of(x.data(), flat_.data() + i * n);
    if (d < best.distance) best = {d, i};
  }
  return best;
}

double Domain::clearance(std::span<const double> x) const noexcept {
  const double base = base_clearance(x);
  if (punctures_.empty() || base <= 0.0) return base;
  const std::size_t n = dim();
  double best = base;
  for (std::size_t i = 0; i < punctures_.size(); ++i) {
    best = std::min(best, space_.distance_of(x.data(), flat_.data() + i * n));
  }
  return best;
}

Domain Domain::localized(const Vector& center, double radius) const {
  if (punctures_.empty()) return *this;
  // For z in B(center, radius): d_G(z) <= d_G(center) + radius, and a puncture farther than
  // that from every such z never attains the minimum.
  const double bound = clearance(center.coords()) + radius;
  PunctureSet kept;
  kept.kappa = punctures_.kappa;
  for (const Vector& x : punctures_.points) {
    if (distance(space_, center, x) - radius < bound) kept.points.push_back(x);
  }
  if (kept.points.size() == punctures_.size()) return *this;
  return Domain(space_, base_, std::move(kept));
}

std::optional<Vector> Domain::inward_offset(const Vector& x, double delta) const {
  if (const auto* ball = std::get_if<Ball>(&base_)) {
    if (!(delta > 0.0 && delta < ball->radius)) return std::nullopt;
    Vector dir = x - ball->center;
    const double len = norm(space_, dir);
    if (len == 0.0) return std::nullopt;
    return ball->center + dir * ((ball->radius - delta) / len);
  }
  if (const auto* half = std::get_if<HalfSpace>(&base_)) {
    if (!(delta > 0.0)) return std::nullopt;
    const double current = base_clearance(x.coords());
    const double a2 = dot(half->normal, half->normal);
    const double t = (delta - current) * normal_dual_ / a2;
    return x - half->normal * t;
  }
  return std::nullopt;
}

double Domain::scale() const noexcept {
  if (const auto* ball = std::get_if<Ball>(&base_)) return ball->radius;
  return 1.0;
}

double dist_boundary_base(const Domain& domain, const Vector& x) {
  domain.require_conforms(x);
  const double d = domain.base_clearance(x.coords());
  if (!(d > 0.0)) throw GeometryError("point is not strictly inside the base domain");
  return d;
}

PunctureHit dist_puncture(const Domain& domain, const Vector& x) {
  domain.require_conforms(x);
  if (!domain.has_punctures()) throw InvalidArgument("puncture set is empty");
  return domain.nearest_puncture(x.coords());
}

double d_G(const Domain& domain, const Vector& x) {
  domain.require_conforms(x);
  const double d = domain.clearance(x.coords());
  if (!(d > 0.0)) throw GeometryError("point is not in the punctured domain");
  return d;
}

Membership contains(const Domain& domain, const Vector& x, double tol) {
  domain.require_conforms(x);
  const double c = domain.clearance(x.coords());
  if (c >= tol) return Membership::Inside;
  if (c > -tol) return Membership::Near;
  return Membership::Outside;
}

double lambda_sigma(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  return -std::expm1(-sigma / 2.0);
}

double lambda_zero() { return lambda_sigma(0.5); }

std::size_t ball_puncture_count(const Domain& domain, const Vector& x, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in (0, 1)");
  const double radius = lambda * dist_boundary_base(domain, x);
  std::size_t count = 0;
  for (const Vector& p : domain.punctures().points) {
    if (distance(domain.space(), p, x) < radius) ++count;
  }
  return count;
}

}  // namespace qh
