#include "qh/qh_metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metric_kernels.hpp"
#include "path_graph.hpp"
#include "qh/error.hpp"

namespace qh {

namespace detail {

namespace {

void lerp_into(const double* a, const double* b, double s, std::size_t n, double* out) noexcept {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + s * (b[k] - a[k]);
}

}  // namespace

bool segment_inside(const Domain& domain, const double* a, const double* b, std::vector<double>& scratch) {
  const std::size_t n = domain.dim();
  scratch.resize(n);
  const double c0 = domain.clearance(std::span<const double>(a, n));
  const double c1 = domain.clearance(std::span<const double>(b, n));
  if (!(c0 > 0.0 && c1 > 0.0)) return false;
  const double length = domain.space().distance_of(a, b);

  struct Piece {
    double s0, s1, c0, c1;
    int depth;
  };
  std::vector<Piece> stack{{0.0, 1.0, c0, c1, 0}};
  while (!stack.empty()) {
    const Piece piece = stack.back();
    stack.pop_back();
    const double h = length * (piece.s1 - piece.s0);
    if (piece.c0 + piece.c1 > h * (1.0 + 1e-12)) continue;
    if (piece.depth >= 64) return false;
    const double sm = 0.5 * (piece.s0 + piece.s1);
    lerp_into(a, b, sm, n, scratch.data());
    const double cm = domain.clearance(std::span<const double>(scratch.data(), n));
    if (!(cm > 0.0)) return false;
    stack.push_back({sm, piece.s1, cm, piece.c1, piece.depth + 1});
    stack.push_back({piece.s0, sm, piece.c0, cm, piece.depth + 1});
  }
  return true;
}

QhLength edge_qh_length(const Domain& domain, const double* a, const double* b, const QuadratureParams& quad,
                        std::vector<double>& scratch) {
  const std::size_t n = domain.dim();
  scratch.resize(n);
  const double length = domain.space().distance_of(a, b);
  auto f = [&](double s) {
    lerp_into(a, b, s, n, scratch.data());
    const double c = domain.clearance(std::span<const double>(scratch.data(), n));
    if (!(c > 0.0)) throw GeometryError("quadrature node outside the domain");
    return length / c;
  };

  constexpr int kPanels = 8;
  constexpr int kPanelDepth = 3;
  double values[2 * kPanels + 1];
  for (int k = 0; k <= 2 * kPanels; ++k) values[k] = f(static_cast<double>(k) / (2 * kPanels));
  double coarse = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    coarse += (values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2]) / (6.0 * kPanels);
  }
  struct Piece {
    double l, r, fl, fm, fr, whole;
    int depth;
  };
  std::vector<Piece> stack;
  stack.reserve(64);
  auto integrate = [&](double tol_density) {
    stack.clear();
    for (int p = kPanels - 1; p >= 0; --p) {
      const double l = static_cast<double>(p) / kPanels;
      const double r = static_cast<double>(p + 1) / kPanels;
      const double fl = values[2 * p], fm = values[2 * p + 1], fr = values[2 * p + 2];
      stack.push_back({l, r, fl, fm, fr, (r - l) * (fl + 4.0 * fm + fr) / 6.0, kPanelDepth});
    }
    QhLength out;
    while (!stack.empty()) {
      const Piece pc = stack.back();
      stack.pop_back();
      const double m = 0.5 * (pc.l + pc.r);
      const double flm = f(0.5 * (pc.l + m));
      const double frm = f(0.5 * (m + pc.r));
      const double left = (m - pc.l) * (pc.fl + 4.0 * flm + pc.fm) / 6.0;
      const double right = (pc.r - m) * (pc.fm + 4.0 * frm + pc.fr) / 6.0;
      const double refined = left + right;
      const double change = refined - pc.whole;
      if (std::abs(change) <= 15.0 * tol_density * (pc.r - pc.l) ||
          std::abs(change) <= 1e-15 * std::abs(refined)) {
        out.value += refined + change / 15.0;
        out.error += std::abs(change) / 15.0;
        continue;
      }
      if (pc.depth >= quad.max_depth) {
        throw QuadratureError("quasihyperbolic length did not converge within max_depth = " +
                              std::to_string(quad.max_depth));
      }
      stack.push_back({m, pc.r, pc.fm, frm, pc.fr, right, pc.depth + 1});
      stack.push_back({pc.l, m, pc.fl, flm, pc.fm, left, pc.depth + 1});
    }
    return out;
  };
  // The coarse Simpson sum can overshoot badly near the boundary; tighten against the
  // refined value until the error estimate is within rel_tol of it.
  QhLength out = integrate(quad.rel_tol * coarse);
  for (int pass = 0; pass < 4 && out.error > quad.rel_tol * out.value; ++pass) {
    out = integrate(0.5 * quad.rel_tol * out.value);
  }
  return out;
}

double edge_qh_estimate(const Domain& domain, const double* a, const double* b, std::vector<double>& scratch) {
  static constexpr double kNodes[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
  static constexpr double kWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const std::size_t n = domain.dim();
  scratch.resize(n);
  const double length = domain.space().distance_of(a, b);
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    lerp_into(a, b, kNodes[k], n, scratch.data());
    const double c = domain.clearance(std::span<const double>(scratch.data(), n));
    if (!(c > 0.0)) return kInf;
    sum += kWeights[k] / c;
  }
  return length * sum;
}

}  // namespace detail

void QuadratureParams::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("quadrature rel_tol must lie in (0, 1)");
  if (max_depth < 4) throw InvalidArgument("quadrature max_depth must be at least 4");
}

void GraphParams::validate() const {
  if (node_budget < 2) throw InvalidArgument("node_budget must be at least 2");
  if (!(target_ratio >= 1.0)) throw InvalidArgument("target_ratio must be at least 1");
  if (ring_levels < 1) throw InvalidArgument("ring_levels must be positive");
  if (refine_rounds < 0) throw InvalidArgument("refine_rounds must be nonnegative");
  if (ring_points < 3) throw InvalidArgument("ring_points must be at least 3");
}

double DistanceBracket::ratio() const noexcept {
  if (lower == 0.0) return upper == 0.0 ? 1.0 : kInf;
  return upper / lower;
}

bool segment_inside(const Domain& domain, const Vector& a, const Vector& b) {
  domain.require_conforms(a);
  domain.require_conforms(b);
  std::vector<double> scratch;
  return detail::segment_inside(domain, a.data(), b.data(), scratch);
}

QhLength qh_length(const Domain& domain, const Polyline& poly, const QuadratureParams& quad) {
  quad.validate();
  std::vector<double> scratch;
  QhLength total;
  const auto& v = poly.vertices();
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    domain.require_conforms(v[e]);
    domain.require_conforms(v[e + 1]);
    if (!detail::segment_inside(domain, v[e].data(), v[e + 1].data(), scratch)) {
      throw GeometryError("edge " + std::to_string(e) + " is not certified inside the domain");
    }
    const QhLength piece = detail::edge_qh_length(domain, v[e].data(), v[e + 1].data(), quad, scratch);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

double j_metric(const Domain& domain, const Vector& z1, const Vector& z2) {
  const double d1 = d_G(domain, z1);
  const double d2 = d_G(domain, z2);
  const double len = distance(domain.space(), z1, z2);
  if (len == 0.0) return 0.0;
  return std::log1p(len / std::min(d1, d2));
}

double k_lower(const Domain& domain, const Vector& z1, const Vector& z2) {
  const double j = j_metric(domain, z1, z2);
  const double d1 = domain.clearance(z1);
  const double d2 = domain.clearance(z2);
  const double log_ratio = std::abs(std::log(std::max(d1, d2) / std::min(d1, d2)));
  return std::max(j, log_ratio);
}

namespace {

// Certified length of a candidate path; a path the quadrature cannot resolve offers no bound.
std::optional<double> candidate_upper(const Domain& domain, const Polyline& poly, const QuadratureParams& quad) {
  try {
    return qh_length(domain, poly, quad).upper();
  } catch (const QuadratureError&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<double> k_upper_direct(const Domain& domain, const Vector& z1, const Vector& z2,
                                     const QuadratureParams& quad) {
  const double d1 = d_G(domain, z1);
  const double d2 = d_G(domain, z2);
  const double len = distance(domain.space(), z1, z2);
  if (len == 0.0) return 0.0;
  std::optional<double> best;
  auto offer = [&](double value) {
    if (!best || value < *best) best = value;
  };
  if (len < d1) offer(std::log1p(len / (d1 - len)));
  if (len < d2) offer(std::log1p(len / (d2 - len)));
  if (segment_inside(domain, z1, z2)) {
    if (auto seg = candidate_upper(domain, Polyline::segment(z1, z2), quad)) offer(*seg);
  }
  return best;
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.dim(), b.data(), b.data() + b.dim());
}

DistanceBracket bracket_ordered(const Domain& domain, const Vector& a, const Vector& b, const GraphParams& graph,
                                const QuadratureParams& quad) {
  DistanceBracket out;
  out.lower = k_lower(domain, a, b);
  const double da = domain.clearance(a);
  const double db = domain.clearance(b);
  const double len = distance(domain.space(), a, b);

  // Straight segment and the ball estimate; the segment is the witness for both.
  if (segment_inside(domain, a, b)) {
    if (auto seg = candidate_upper(domain, Polyline::segment(a, b), quad)) out.upper = *seg;
    if (len < da) out.upper = std::min(out.upper, std::log1p(len / (da - len)));
    if (len < db) out.upper = std::min(out.upper, std::log1p(len / (db - len)));
    if (out.upper < kInf) out.witness = Polyline::segment(a, b);
  }
  if (out.upper <= graph.target_ratio * out.lower || graph.node_budget <= 2) return out;

  const auto [center, radius] = detail::PathGraph::region(a, da, b, db, len);
  const Domain local = domain.localized(center, radius);
  detail::PathGraph g(local, a, b, graph);
  auto path = g.shortest_path();
  for (int round = 0;; ++round) {
    if (path && path->size() >= 2) {
      const Polyline poly = g.to_polyline(*path);
      const auto candidate = candidate_upper(domain, poly, quad);
      if (candidate && *candidate < out.upper) {
        out.upper = *candidate;
        out.witness = poly;
      }
    }
    if (out.upper <= graph.target_ratio * out.lower || round >= graph.refine_rounds || !path) break;
    g.refine(*path, round);
    path = g.shortest_path();
  }
  return out;
}

}  // namespace

DistanceBracket k_bracket(const Domain& domain, const Vector& z1, const Vector& z2, const GraphParams& graph,
                          const QuadratureParams& quad) {
  graph.validate();
  quad.validate();
  d_G(domain, z1);
  d_G(domain, z2);
  if (z1 == z2) return DistanceBracket{0.0, 0.0, std::nullopt};
  if (lex_less(z2, z1)) {
    DistanceBracket out = bracket_ordered(domain, z2, z1, graph, quad);
    if (out.witness) out.witness = out.witness->reversed();
    return out;
  }
  return bracket_ordered(domain, z1, z2, graph, quad);
}

NearGeodesicResult near_geodesic(const Domain& domain, const Vector& z1, const Vector& z2, double nu,
                                 const GraphParams& graph, const QuadratureParams& quad) {
  if (!(nu > 1.0)) throw InvalidArgument("near-geodesic factor nu must exceed 1");
  if (z1 == z2) throw InvalidArgument("near-geodesic endpoints must differ");
  DistanceBracket bracket = k_bracket(domain, z1, z2, graph, quad);
  if (!bracket.witness) throw GeometryError("no connecting path found within the node budget");
  const Polyline path = *bracket.witness;
  const auto& v = path.vertices();

  std::vector<double> prefix(v.size(), 0.0);
  std::vector<double> scratch;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    prefix[e + 1] = prefix[e] + detail::edge_qh_length(domain, v[e].data(), v[e + 1].data(), quad, scratch).upper();
  }
  double worst = 1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double lower = k_lower(domain, v[i], v[j]);
      if (lower > 0.0) worst = std::max(worst, (prefix[j] - prefix[i]) / lower);
    }
  }
  NearGeodesicResult out{path, bracket.ratio(), worst, worst <= nu, std::move(bracket)};
  return out;
}

LogInequalitySlacks logine_check(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("r must lie in [0, 1)");
  LogInequalitySlacks out;
  out.lower_form = r / (1.0 - r / 2.0);
  out.middle = -std::log1p(-r);
  out.upper_form = r / (1.0 - r);
  out.left_slack = out.middle - out.lower_form;
  out.right_slack = out.upper_form - out.middle;
  constexpr double kRoundoff = 1e-12;
  out.holds = out.left_slack >= -kRoundoff && out.right_slack >= -kRoundoff;
  return out;
}

}  // namespace qh
