#include <algorithm>
#include <cmath>

#include "qh/analysis.hpp"
#include "qh/error.hpp"

namespace qh {

namespace {

constexpr int kMaxDraws = 10000;

// Center and radius of a norm ball contained in the base (whole space: any ball around P).
std::pair<Vector, double> sampling_ball(const Domain& domain) {
  const std::size_t n = domain.dim();
  if (const auto* ball = std::get_if<Ball>(&domain.base())) return {ball->center, ball->radius};
  if (const auto* half = std::get_if<HalfSpace>(&domain.base())) {
    const Vector foot = half->normal * (half->offset / dot(half->normal, half->normal));
    return {*domain.inward_offset(foot, 1.0), 1.0};
  }
  const auto& pts = domain.punctures().points;
  Vector centroid(n);
  for (const Vector& p : pts) centroid += p;
  centroid *= 1.0 / static_cast<double>(pts.size());
  double spread = 0.0;
  for (const Vector& p : pts) spread = std::max(spread, distance(domain.space(), p, centroid));
  return {centroid, 2.0 * spread + 1.0};
}

bool in_g(const Domain& domain, const Vector& z) { return domain.clearance(z) > 0.0; }

Vector puncture_adjacent(const Domain& domain, Rng& rng) {
  const auto& pts = domain.punctures().points;
  const NormSpec& space = domain.space();
  const std::size_t i = rng.index(pts.size());
  double local = domain.base_clearance(pts[i].coords());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k != i) local = std::min(local, distance(space, pts[i], pts[k]));
  }
  const double rho = 0.25 * local * std::pow(10.0, -rng.uniform(0.0, 6.0));
  return pts[i] + sample_direction(space, rng) * rho;
}

Vector boundary_adjacent(const Domain& domain, Rng& rng) {
  const Vector y = sample_point(domain, rng);
  if (domain.is_whole_space()) return y;
  const double delta = 0.5 * domain.scale() * std::pow(10.0, -rng.uniform(0.0, 4.0));
  if (auto z = domain.inward_offset(y, delta)) return *z;
  return y;
}

}  // namespace

Vector sample_direction(const NormSpec& space, Rng& rng) {
  Vector v = rng.direction(static_cast<std::size_t>(space.dim()));
  return v * (1.0 / norm(space, v));
}

Vector sample_point(const Domain& domain, Rng& rng) {
  const auto [center, radius] = sampling_ball(domain);
  const std::size_t n = domain.dim();
  const NormSpec& space = domain.space();
  Vector x(n);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    for (std::size_t k = 0; k < n; ++k) x[k] = center[k] + radius * rng.uniform(-1.0, 1.0);
    if (distance(space, x, center) < radius && domain.base_clearance(x.coords()) > 0.0) return x;
  }
  throw InfeasibleError("could not draw a point of the base domain");
}

PairSampler parse_pair_sampler(const std::string& name) {
  if (name == "uniform") return PairSampler::Uniform;
  if (name == "puncture") return PairSampler::PunctureAdjacent;
  if (name == "boundary") return PairSampler::BoundaryAdjacent;
  if (name == "axial") return PairSampler::Axial;
  if (name == "mixed") return PairSampler::Mixed;
  throw InvalidArgument("unknown pair sampler '" + name + "'");
}

std::string to_string(PairSampler sampler) {
  switch (sampler) {
    case PairSampler::Uniform: return "uniform";
    case PairSampler::PunctureAdjacent: return "puncture";
    case PairSampler::BoundaryAdjacent: return "boundary";
    case PairSampler::Axial: return "axial";
    case PairSampler::Mixed: return "mixed";
  }
  return "uniform";
}

std::pair<Vector, Vector> sample_pair(const Domain& domain, PairSampler sampler, Rng& rng, std::size_t index) {
  if (sampler == PairSampler::Mixed) {
    static constexpr PairSampler cycle[] = {PairSampler::Uniform, PairSampler::PunctureAdjacent,
                                            PairSampler::BoundaryAdjacent};
    sampler = cycle[index % 3];
  }
  if (sampler == PairSampler::PunctureAdjacent && !domain.has_punctures()) sampler = PairSampler::Uniform;
  if (sampler == PairSampler::BoundaryAdjacent && domain.is_whole_space()) sampler = PairSampler::Uniform;

  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Vector z1;
    Vector z2;
    switch (sampler) {
      case PairSampler::Uniform:
        z1 = sample_point(domain, rng);
        z2 = sample_point(domain, rng);
        break;
      case PairSampler::PunctureAdjacent:
        z1 = puncture_adjacent(domain, rng);
        z2 = rng.uniform() < 0.5 ? puncture_adjacent(domain, rng) : sample_point(domain, rng);
        break;
      case PairSampler::BoundaryAdjacent:
        z1 = boundary_adjacent(domain, rng);
        z2 = rng.uniform() < 0.5 ? boundary_adjacent(domain, rng) : sample_point(domain, rng);
        break;
      case PairSampler::Axial: {
        if (!std::holds_alternative<HalfSpace>(domain.base())) {
          throw InvalidArgument("axial pairs need a half-space base");
        }
        const Vector y = sample_point(domain, rng);
        const double a = rng.log_uniform(1e-3, 10.0);
        const double b = rng.log_uniform(1e-3, 10.0);
        z1 = *domain.inward_offset(y, a);
        z2 = *domain.inward_offset(y, b);
        break;
      }
      case PairSampler::Mixed: break;
    }
    if (in_g(domain, z1) && in_g(domain, z2)) return {std::move(z1), std::move(z2)};
  }
  throw InfeasibleError("could not draw a pair of points in the domain");
}

}  // namespace qh
