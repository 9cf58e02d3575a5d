#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "qh/error.hpp"
#include "qh/qh_metric.hpp"

namespace qh {
namespace {

using testing::half_plane_k;
using testing::point_in_ball;
using testing::unit_ball;
using testing::upper_half_space;

const NormSpec kE2 = NormSpec::euclidean(2);

// Integral of |dz| / y along the straight segment from a to b in the upper half-plane.
double half_plane_segment(const Vector& a, const Vector& b) {
  const double len = distance(kE2, a, b);
  const double dy = b[1] - a[1];
  if (std::abs(dy) < 1e-12 * a[1]) return len / a[1];
  return len * std::log(b[1] / a[1]) / dy;
}

TEST(QhLength, HalfSpaceAxialSegment) {
  const Domain h = upper_half_space(kE2);
  for (auto [a, b] : {std::pair{1.0, 2.0}, {0.01, 100.0}, {3.0, 3.5}}) {
    const QhLength len = qh_length(h, Polyline::segment({0.0, a}, {0.0, b}));
    EXPECT_NEAR(len.value, std::log(b / a), 1e-8 * std::log(b / a));
    EXPECT_LE(len.error, 1e-8 * len.value);
  }
}

TEST(QhLength, BallRadialSegment) {
  for (double t : {0.1, 0.5, 0.9, 0.999}) {
    const QhLength len = qh_length(unit_ball(kE2), Polyline::segment(Vector(2), {t, 0.0}));
    EXPECT_NEAR(len.value, std::log(1.0 / (1.0 - t)), 1e-8 * std::log(1.0 / (1.0 - t)));
  }
}

TEST(QhLengthProperty, MatchesTheHalfPlaneSegmentIntegral) {
  const Domain h = upper_half_space(kE2);
  for (std::uint64_t c = 0; c < 200; ++c) {
    Rng rng(derive_seed(31, c));
    const Vector a{rng.uniform(-3.0, 3.0), rng.log_uniform(1e-3, 10.0)};
    const Vector b{rng.uniform(-3.0, 3.0), rng.log_uniform(1e-3, 10.0)};
    const double exact = half_plane_segment(a, b);
    const QhLength len = qh_length(h, Polyline::segment(a, b));
    EXPECT_NEAR(len.value, exact, 2e-8 * exact) << "case " << c;
    EXPECT_LE(exact, len.upper() * (1.0 + 1e-12));
  }
}

TEST(QhLength, RejectsEdgesLeavingTheDomain) {
  const Domain g = unit_ball(kE2, {{{0.0, 0.0}}});
  EXPECT_THROW(qh_length(g, Polyline::segment({-0.5, 0.0}, {0.5, 0.0})), GeometryError);
  EXPECT_THROW(qh_length(unit_ball(kE2), Polyline::segment({0.5, 0.0}, {1.5, 0.0})), GeometryError);
  QuadratureParams q;
  q.max_depth = 4;
  q.rel_tol = 1e-14;
  EXPECT_THROW(qh_length(unit_ball(kE2), Polyline::segment(Vector(2), {0.999999, 0.0}), q), QuadratureError);
}

TEST(QhLengthProperty, PuncturesOnlyLengthenPaths) {
  for (std::uint64_t c = 0; c < 50; ++c) {
    Rng rng(derive_seed(32, c));
    const NormSpec space = testing::any_space(rng, 2, 3);
    const auto n = static_cast<std::size_t>(space.dim());
    PunctureSet p;
    for (int k = 0; k < 4; ++k) p.points.push_back(point_in_ball(space, rng, Vector(n), 0.8));
    const Domain g = unit_ball(space, p);
    std::vector<Vector> vs;
    for (int k = 0; k < 4; ++k) vs.push_back(point_in_ball(space, rng, Vector(n), 0.9));
    const Polyline path(vs);
    bool inside = true;
    for (std::size_t e = 0; e + 1 < vs.size(); ++e) inside = inside && segment_inside(g, vs[e], vs[e + 1]);
    if (!inside) continue;
    const QhLength lg = qh_length(g, path);
    const QhLength ld = qh_length(g.base_domain(), path);
    EXPECT_GE(lg.value + lg.error, ld.value - ld.error) << "case " << c;
  }
}

TEST(SegmentInside, Examples) {
  const Domain g = unit_ball(kE2, {{{0.0, 0.0}}});
  EXPECT_TRUE(segment_inside(g, {0.1, 0.1}, {0.5, 0.1}));
  EXPECT_FALSE(segment_inside(g, {-0.5, 0.0}, {0.5, 0.0}));
  EXPECT_FALSE(segment_inside(g, {0.5, 0.5}, {0.9, 0.9}));
  EXPECT_TRUE(segment_inside(g, {-0.5, 1e-6}, {0.5, 1e-6}));
}

TEST(JMetric, Examples) {
  const Domain d = unit_ball(kE2);
  EXPECT_EQ(j_metric(d, {0.3, 0.1}, {0.3, 0.1}), 0.0);
  EXPECT_NEAR(j_metric(d, Vector(2), {0.5, 0.0}), std::log(2.0), 1e-15);
  EXPECT_EQ(j_metric(d, {0.1, 0.7}, {-0.4, 0.2}), j_metric(d, {-0.4, 0.2}, {0.1, 0.7}));
  EXPECT_THROW(j_metric(d, Vector(2), {2.0, 0.0}), GeometryError);
}

TEST(KLower, Examples) {
  const Domain h = upper_half_space(kE2);
  EXPECT_EQ(k_lower(h, {0.0, 1.0}, {0.0, 1.0}), 0.0);
  for (auto [a, b] : {std::pair{1.0, 2.0}, {0.5, 8.0}}) {
    const double expected = std::max(std::log(1.0 + (b - a) / a), std::log(b / a));
    EXPECT_NEAR(k_lower(h, {0.0, a}, {0.0, b}), expected, 1e-15);
    EXPECT_LE(k_lower(h, {0.0, a}, {0.0, b}), std::log(b / a) + 1e-15);
  }
  EXPECT_EQ(k_lower(h, {0.0, 1.0}, {3.0, 1.0}), j_metric(h, {0.0, 1.0}, {3.0, 1.0}));
}

TEST(KUpperDirect, Examples) {
  const auto ball = k_upper_direct(unit_ball(kE2), Vector(2), {0.5, 0.0});
  ASSERT_TRUE(ball.has_value());
  EXPECT_LE(*ball, std::log(2.0) * (1.0 + 1e-8));
  const auto axial = k_upper_direct(upper_half_space(kE2), {0.0, 1.0}, {0.0, 5.0});
  ASSERT_TRUE(axial.has_value());
  EXPECT_NEAR(*axial, std::log(5.0), 1e-7);
  EXPECT_LE(*axial, std::log(1.0 + 4.0 / (5.0 - 4.0)) * (1.0 + 1e-8));
  const Domain g = unit_ball(kE2, {{{0.0, 0.0}}});
  EXPECT_FALSE(k_upper_direct(g, {-0.5, 0.0}, {0.5, 0.0}).has_value());
}

TEST(KBracket, HalfSpaceAxialIsExact) {
  const DistanceBracket br = k_bracket(upper_half_space(kE2), {0.0, 1.0}, {0.0, std::exp(1.0)});
  EXPECT_LE(br.lower, 1.0 + 1e-12);
  EXPECT_GE(br.upper, 1.0 - 1e-12);
  EXPECT_LE(br.upper - 1.0, 1e-6);
  ASSERT_TRUE(br.witness.has_value());
}

TEST(KBracket, BallRadialContainsTheClosedForm) {
  const DistanceBracket br = k_bracket(unit_ball(kE2), Vector(2), {0.9, 0.0});
  EXPECT_LE(br.lower, std::log(10.0) + 1e-12);
  EXPECT_GE(br.upper, std::log(10.0) - 1e-12);
}

TEST(KBracket, CoincidentPoints) {
  const DistanceBracket br = k_bracket(unit_ball(kE2), {0.2, 0.1}, {0.2, 0.1});
  EXPECT_EQ(br.lower, 0.0);
  EXPECT_EQ(br.upper, 0.0);
}

TEST(KBracket, GoesAroundAPuncture) {
  // Every path between the antipodes passes at clearance <= 0.5 around the puncture at 0,
  // and a half circle of radius 1/2 costs pi.
  const Domain g = unit_ball(kE2, {{{0.0, 0.0}}});
  const DistanceBracket br = k_bracket(g, {-0.5, 0.0}, {0.5, 0.0});
  ASSERT_TRUE(br.bounded());
  EXPECT_LE(br.lower, br.upper);
  EXPECT_LT(br.upper, std::numbers::pi * 1.01);
  const QhLength witness = qh_length(g, *br.witness);
  EXPECT_NEAR(witness.upper(), br.upper, 1e-8 * br.upper);
}

TEST(KBracketProperty, ContainsTheHalfPlaneDistance) {
  const Domain h = upper_half_space(kE2);
  GraphParams graph;
  graph.node_budget = 600;
  for (std::uint64_t c = 0; c < 30; ++c) {
    Rng rng(derive_seed(33, c));
    const Vector a{rng.uniform(-2.0, 2.0), rng.log_uniform(1e-2, 4.0)};
    const Vector b{rng.uniform(-2.0, 2.0), rng.log_uniform(1e-2, 4.0)};
    graph.seed = c;
    const DistanceBracket br = k_bracket(h, a, b, graph);
    const double exact = half_plane_k(a, b);
    EXPECT_LE(br.lower, exact * (1.0 + 1e-12)) << "case " << c;
    EXPECT_GE(br.upper, exact * (1.0 - 1e-9)) << "case " << c;
    EXPECT_LE(br.upper, exact * 1.1) << "case " << c;
    EXPECT_LE(j_metric(h, a, b), br.upper);
  }
}

TEST(KBracketProperty, OrderedSymmetricDeterministic) {
  GraphParams graph;
  graph.node_budget = 400;
  for (std::uint64_t c = 0; c < 20; ++c) {
    Rng rng(derive_seed(34, c));
    const NormSpec space = testing::any_space(rng, 2, 3);
    const auto n = static_cast<std::size_t>(space.dim());
    PunctureSet p;
    for (int k = 0; k < 3; ++k) p.points.push_back(point_in_ball(space, rng, Vector(n), 0.8));
    const Domain g = unit_ball(space, p);
    const Vector z1 = point_in_ball(space, rng, Vector(n), 0.95);
    const Vector z2 = point_in_ball(space, rng, Vector(n), 0.95);
    graph.seed = c;
    const DistanceBracket ab = k_bracket(g, z1, z2, graph);
    const DistanceBracket ba = k_bracket(g, z2, z1, graph);
    const DistanceBracket again = k_bracket(g, z1, z2, graph);
    EXPECT_LE(ab.lower, ab.upper) << "case " << c;
    EXPECT_EQ(ab.lower, ba.lower);
    EXPECT_EQ(ab.upper, ba.upper);
    EXPECT_EQ(ab.upper, again.upper);
    EXPECT_EQ(ab.lower, again.lower);
  }
}

TEST(KBracketProperty, RefinementNeverRaisesTheUpperBound) {
  const Domain g = unit_ball(kE2, {{{0.0, 0.0}, {0.4, 0.3}}});
  GraphParams graph;
  graph.node_budget = 300;
  graph.target_ratio = 1.0;
  for (std::uint64_t c = 0; c < 8; ++c) {
    Rng rng(derive_seed(35, c));
    const Vector z1 = point_in_ball(kE2, rng, Vector(2), 0.9);
    const Vector z2 = point_in_ball(kE2, rng, Vector(2), 0.9);
    graph.seed = c;
    double previous = kInf;
    for (int rounds = 0; rounds <= 4; ++rounds) {
      graph.refine_rounds = rounds;
      const double upper = k_bracket(g, z1, z2, graph).upper;
      EXPECT_LE(upper, previous) << "case " << c << " rounds " << rounds;
      previous = upper;
    }
  }
}

TEST(NearGeodesic, HalfSpaceAxialPair) {
  const NearGeodesicResult r = near_geodesic(upper_half_space(kE2), {0.0, 1.0}, {0.0, 4.0}, 2.0);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.worst_subarc_ratio, 1.0, 1e-6);
  EXPECT_NEAR(r.global_ratio, 1.0, 1e-6);
  EXPECT_THROW(near_geodesic(upper_half_space(kE2), {0.0, 1.0}, {0.0, 1.0}, 2.0), InvalidArgument);
  EXPECT_THROW(near_geodesic(upper_half_space(kE2), {0.0, 1.0}, {0.0, 2.0}, 1.0), InvalidArgument);
}

TEST(NearGeodesic, TinyBudgetIsReportedHonestly) {
  Rng rng(36);
  PunctureSet p;
  for (int k = 0; k < 30; ++k) p.points.push_back(point_in_ball(kE2, rng, Vector(2), 0.9));
  GraphParams graph;
  graph.node_budget = 8;
  graph.refine_rounds = 0;
  try {
    const NearGeodesicResult r = near_geodesic(unit_ball(kE2, p), {-0.95, 0.01}, {0.95, -0.01}, 1.05, graph);
    EXPECT_GE(r.worst_subarc_ratio, 1.0);
    if (r.certified) EXPECT_LE(r.worst_subarc_ratio, 1.05);
  } catch (const GeometryError&) {
    SUCCEED();
  }
}

TEST(LogInequality, Examples) {
  const LogInequalitySlacks zero = logine_check(0.0);
  EXPECT_EQ(zero.lower_form, 0.0);
  EXPECT_EQ(zero.middle, 0.0);
  EXPECT_EQ(zero.upper_form, 0.0);
  EXPECT_TRUE(zero.holds);
  const LogInequalitySlacks half = logine_check(0.5);
  EXPECT_NEAR(half.lower_form, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(half.middle, std::log(2.0), 1e-15);
  EXPECT_NEAR(half.upper_form, 1.0, 1e-15);
  const LogInequalitySlacks near_one = logine_check(0.99);
  EXPECT_TRUE(near_one.holds);
  EXPECT_GT(near_one.right_slack, 90.0);
  EXPECT_THROW(logine_check(1.0), InvalidArgument);
  EXPECT_THROW(logine_check(-0.1), InvalidArgument);
}

TEST(Params, Validation) {
  QuadratureParams q;
  q.rel_tol = 1.0;
  EXPECT_THROW(q.validate(), InvalidArgument);
  q = {};
  q.max_depth = 3;
  EXPECT_THROW(q.validate(), InvalidArgument);
  GraphParams g;
  g.node_budget = 1;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = {};
  g.target_ratio = 0.9;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = {};
  EXPECT_NO_THROW(g.validate());
}

}  // namespace
}  // namespace qh
