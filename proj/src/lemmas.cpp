#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qh/analysis.hpp"
#include "qh/error.hpp"
#include "trials.hpp"

namespace qh {

using detail::bracket_trial;
using detail::kMaxRedraws;
using detail::run_trials;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "Confirmed";
    case Verdict::PartialConfirm: return "PartialConfirm";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Refuted: return "Refuted";
    case Verdict::PreconditionFailed: return "PreconditionFailed";
  }
  return "Inconclusive";
}

void LemmaReport::add(TrialRecord record) {
  ++trials;
  switch (record.verdict) {
    case Verdict::Confirmed: ++confirmed; break;
    case Verdict::PartialConfirm: ++partial; break;
    case Verdict::Inconclusive: ++inconclusive; break;
    case Verdict::Refuted: ++refuted; break;
    case Verdict::PreconditionFailed: ++precondition_failed; break;
  }
  if (record.verdict != Verdict::PreconditionFailed) {
    worst_slack = std::min(worst_slack, record.rhs - record.lhs_upper);
  }
  records.push_back(std::move(record));
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

// ---------------------------------------------------------------------------------------

Lemma31Report lemma31_suite(const Domain& domain, std::size_t trials, std::uint64_t seed) {
  const double lambda0 = lambda_zero();
  const auto& pts = domain.punctures().points;
  const NormSpec& space = domain.space();
  Lemma31Report out;

  // Part 1: any x in D, any lambda < lambda0.
  out.at_most_one = run_trials("lemma31.1", trials, derive_seed(seed, 1), [&](std::size_t i, Rng& rng) {
    Vector x;
    if (pts.empty() || rng.uniform() < 0.5) {
      x = sample_point(domain, rng);
    } else {
      for (int k = 0; k < kMaxRedraws; ++k) {
        const std::size_t p = rng.index(pts.size());
        x = pts[p] + sample_direction(space, rng) * (lambda0 * rng.uniform() * domain.base_clearance(pts[p].coords()));
        if (domain.base_clearance(x.coords()) > 0.0) break;
      }
    }
    const double lambda = i == 0 ? 0.22 : lambda0 * (1.0 - rng.uniform());
    const double count = static_cast<double>(ball_puncture_count(domain, x, lambda));
    TrialRecord r;
    r.lhs_lower = r.lhs_upper = count;
    r.rhs = 1.0;
    r.verdict = count <= 1.0 ? Verdict::Confirmed : Verdict::Refuted;
    return r;
  });

  if (pts.empty()) {
    out.exactly_one.id = "lemma31.2";
    out.nearest_constant.id = "lemma31.3";
    return out;
  }

  // Draws x near a puncture with d_G(x)/d_D(x) < cap; returns the ratio.
  auto near_draw = [&](Rng& rng, double cap, Vector& x) {
    for (int k = 0; k < kMaxRedraws; ++k) {
      const std::size_t p = rng.index(pts.size());
      const double dd = domain.base_clearance(pts[p].coords());
      x = pts[p] + sample_direction(space, rng) * (cap * dd * rng.uniform());
      const double dx = domain.base_clearance(x.coords());
      if (!(dx > 0.0)) continue;
      const double ratio = domain.clearance(x) / dx;
      if (ratio > 0.0 && ratio < cap) return ratio;
    }
    throw InfeasibleError("could not draw a point close to a puncture");
  };

  // Part 2: exactly one puncture in B(x, lambda d_D(x)) when d_G/d_D < lambda < lambda0.
  out.exactly_one = run_trials("lemma31.2", trials, derive_seed(seed, 2), [&](std::size_t, Rng& rng) {
    Vector x;
    const double ratio = near_draw(rng, lambda0, x);
    double lambda = rng.uniform(ratio, lambda0);
    if (!(lambda > ratio)) lambda = std::nextafter(ratio, lambda0);
    const double count = static_cast<double>(ball_puncture_count(domain, x, lambda));
    TrialRecord r;
    r.lhs_lower = r.lhs_upper = count;
    r.rhs = 1.0;
    r.verdict = count == 1.0 ? Verdict::Confirmed : Verdict::Refuted;
    return r;
  });

  // Part 3: the same puncture realizes d_G on the closed ball of radius d_D(x)/16.
  out.nearest_constant = run_trials("lemma31.3", trials, derive_seed(seed, 3), [&](std::size_t, Rng& rng) {
    Vector x;
    const double ratio = near_draw(rng, 1.0 / 16.0, x);
    double lambda = rng.uniform(ratio, 1.0 / 16.0);
    if (!(lambda > ratio)) lambda = 1.0 / 16.0;
    const double dx = domain.base_clearance(x.coords());
    TrialRecord r;
    r.rhs = 0.0;
    r.verdict = Verdict::Confirmed;
    if (ball_puncture_count(domain, x, lambda) != 1) {
      r.verdict = Verdict::Refuted;
      r.note = "ball does not hold exactly one puncture";
      return r;
    }
    const std::size_t i = domain.nearest_puncture(x.coords()).index;
    const std::size_t n = domain.dim();
    double worst = 0.0;
    for (int s = 0; s < 16; ++s) {
      const double rad = dx / 16.0 * (s < 4 ? 1.0 : std::pow(rng.uniform(), 1.0 / static_cast<double>(n)));
      const Vector z = x + sample_direction(space, rng) * rad;
      const double to_i = distance(space, z, pts[i]);
      const double dev = std::abs(domain.clearance(z) - to_i);
      worst = std::max(worst, dev / std::max(to_i, 1e-300));
      if (dev > 1e-12 * to_i || domain.nearest_puncture(z.coords()).index != i) {
        r.verdict = Verdict::Refuted;
        r.note = "d_G is not realized by the enclosed puncture";
      }
    }
    r.lhs_lower = r.lhs_upper = worst;
    return r;
  });
  return out;
}

// ---------------------------------------------------------------------------------------

bool lemma32_hypotheses(const Domain& domain, const Lemma32Config& c) {
  if (!(c.mu > 0.0 && c.mu <= 1.0 / 32.0)) return false;
  const double g1 = domain.clearance(c.w1);
  const double g2 = domain.clearance(c.w2);
  if (!(g1 > 0.0 && g2 > 0.0)) return false;
  const double d1 = domain.base_clearance(c.w1.coords());
  if (distance(domain.space(), c.w1, c.w2) > c.mu * d1) return false;
  return std::min(g1, g2) <= 0.5 * c.mu * d1;
}

Lemma32Config sample_lemma32_config(const Domain& domain, Rng& rng) {
  const auto& pts = domain.punctures().points;
  const NormSpec& space = domain.space();
  const double floor_d = 0.05 * domain.scale();
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (domain.base_clearance(pts[i].coords()) >= 1.2 * floor_d) usable.push_back(i);
  }
  if (usable.empty()) throw InfeasibleError("no puncture lies deep enough for the comparison lemma");

  for (int k = 0; k < kMaxRedraws; ++k) {
    Lemma32Config c;
    c.mu = rng.log_uniform(1e-4, 1.0 / 32.0);
    const Vector& x = pts[usable[rng.index(usable.size())]];
    const double dx = domain.base_clearance(x.coords());
    const double f = rng.log_uniform(1e-3, 1.0);
    const double g = rng.uniform() < 0.1 ? 1.0 : rng.uniform();
    if (rng.uniform() < 0.5) {
      c.w1 = x + sample_direction(space, rng) * (f * 0.5 * c.mu * dx / (1.0 + 0.5 * c.mu));
      const double d1 = domain.base_clearance(c.w1.coords());
      c.w2 = c.w1 + sample_direction(space, rng) * (g * c.mu * d1);
    } else {
      const double rho = f * 0.5 * c.mu * dx / ((1.0 + c.mu) * (1.0 + 0.5 * c.mu));
      c.w2 = x + sample_direction(space, rng) * rho;
      const double d2 = domain.base_clearance(c.w2.coords());
      c.w1 = c.w2 + sample_direction(space, rng) * (g * c.mu * d2 / (1.0 + c.mu));
    }
    if (domain.base_clearance(c.w1.coords()) < floor_d) continue;
    if (lemma32_hypotheses(domain, c)) return c;
  }
  throw InfeasibleError("could not draw a configuration satisfying the comparison hypotheses");
}

TrialRecord lemma32_trial(const Domain& domain, const Lemma32Config& config, const GraphParams& graph,
                          const QuadratureParams& quad) {
  if (!lemma32_hypotheses(domain, config)) {
    TrialRecord r;
    r.verdict = Verdict::PreconditionFailed;
    r.note = "hypotheses not satisfied";
    return r;
  }
  const double rhs = 6.5 * j_metric(domain, config.w1, config.w2);
  if (config.w1 == config.w2) {
    TrialRecord r;
    r.verdict = Verdict::Confirmed;
    return r;
  }
  return bracket_trial(domain, config.w1, config.w2, rhs, graph, quad);
}

LemmaReport lemma32_check(const Domain& domain, std::size_t trials, std::uint64_t seed, const GraphParams& graph,
                          const QuadratureParams& quad) {
  return run_trials("lemma32", trials, seed, [&](std::size_t, Rng& rng) {
    const Lemma32Config c = sample_lemma32_config(domain, rng);
    TrialRecord r = lemma32_trial(domain, c, graph, quad);
    r.note = "mu=" + std::to_string(c.mu);
    return r;
  });
}

// ---------------------------------------------------------------------------------------

Lemma33Instance build_lemma33_instance(const Domain& domain, Rng& rng, const GraphParams& graph,
                                       const QuadratureParams& quad) {
  if (domain.is_whole_space()) throw InfeasibleError("the construction needs a base domain with boundary");
  const Domain base = domain.base_domain();
  const NormSpec& space = domain.space();
  const std::size_t n = domain.dim();
  const double floor_d = 0.05 * domain.scale();
  for (int k = 0; k < 200; ++k) {
    const Vector w1 = sample_point(base, rng);
    const double d1 = base.clearance(w1);
    if (d1 < floor_d) continue;
    if (domain.has_punctures() && !(domain.nearest_puncture(w1.coords()).distance > d1 / 128.0)) continue;
    const Vector x = w1 + sample_direction(space, rng) * (d1 / 128.0);
    if (!(base.clearance(x) > 0.0)) continue;

    PunctureSet enlarged = domain.punctures();
    enlarged.points.push_back(x);
    if (!domain.punctures().empty()) {
      // Only pairs involving the new point need certification.
      bool separated = true;
      for (const Vector& y : domain.punctures().points) {
        if (x == y) {
          separated = false;
          break;
        }
        if (k_lower(base, x, y) >= enlarged.kappa) continue;
        const DistanceBracket br = k_bracket(base, x, y, graph, quad);
        if (!(br.lower >= enlarged.kappa)) {
          separated = false;
          break;
        }
      }
      if (!separated) continue;
    }

    Vector u = rng.direction(n);
    Vector v = rng.direction(n);
    if (n == 2) {
      u = unit_vector(2, 0);
      v = unit_vector(2, 1);
    }
    PlaneBasis plane = PlaneBasis::standard(n);
    try {
      plane = PlaneBasis(u, v);
    } catch (const InvalidArgument&) {
    }
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Vector w2 = sphere_circle_point(space, w1, d1 / 32.0, plane, theta);
    Domain g = domain.with_punctures(std::move(enlarged));
    if (!(g.clearance(w2) > 0.0) || !(g.clearance(w1) > 0.0)) continue;
    return {std::move(g), w1, std::move(w2)};
  }
  throw InfeasibleError("could not embed the auxiliary puncture construction in the domain");
}

TrialRecord lemma33_trial(const Lemma33Instance& instance, const GraphParams& graph,
                          const QuadratureParams& quad) {
  const Domain base = instance.domain.base_domain();
  const double rhs = 512.0 * k_lower(base, instance.w1, instance.w2);
  return bracket_trial(instance.domain, instance.w1, instance.w2, rhs, graph, quad);
}

LemmaReport lemma33_check(const Domain& domain, std::size_t trials, std::uint64_t seed, const GraphParams& graph,
                          const QuadratureParams& quad) {
  return run_trials("lemma33", trials, seed, [&](std::size_t, Rng& rng) {
    const Lemma33Instance inst = build_lemma33_instance(domain, rng, graph, quad);
    return lemma33_trial(inst, graph, quad);
  });
}

// ---------------------------------------------------------------------------------------

namespace {

// d_G >= d_D/128 along [a, b]: f = d_G - d_D/128 is (1 + 1/128)-Lipschitz, so pieces with
// f0 + f1 >= L h are certified.
bool clearance_ratio_holds(const Domain& g, const Domain& d, const Vector& a, const Vector& b) {
  constexpr double kLip = 1.0 + 1.0 / 128.0;
  auto f = [&](const Vector& z) { return g.clearance(z) - d.clearance(z) / 128.0; };
  const double length = distance(g.space(), a, b);
  struct Piece {
    double s0, s1, f0, f1;
    int depth;
  };
  const double fa = f(a);
  const double fb = f(b);
  if (fa < 0.0 || fb < 0.0) return false;
  std::vector<Piece> stack{{0.0, 1.0, fa, fb, 0}};
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    if (p.f0 + p.f1 >= kLip * length * (p.s1 - p.s0)) continue;
    if (p.depth >= 48) return false;
    const double sm = 0.5 * (p.s0 + p.s1);
    const double fm = f(segment_point(a, b, sm));
    if (fm < 0.0) return false;
    stack.push_back({sm, p.s1, fm, p.f1, p.depth + 1});
    stack.push_back({p.s0, sm, p.f0, fm, p.depth + 1});
  }
  return true;
}

}  // namespace

Lemma34Result lemma34_check(const Domain& domain, const Polyline& path, const QuadratureParams& quad,
                            bool from_near_geodesic) {
  const Domain base = domain.base_domain();
  Lemma34Result out;
  out.from_near_geodesic = from_near_geodesic;
  const auto& v = path.vertices();
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (!segment_inside(domain, v[k], v[k + 1])) {
      out.verdict = Verdict::PreconditionFailed;
      out.note = "path leaves the punctured domain";
      return out;
    }
    if (!clearance_ratio_holds(domain, base, v[k], v[k + 1])) {
      out.verdict = Verdict::PreconditionFailed;
      out.note = "d_G < d_D/128 somewhere on the path";
      return out;
    }
  }
  out.length_g = qh_length(domain, path, quad);
  out.length_d = qh_length(base, path, quad);
  out.k_lower_d = k_lower(base, path.front(), path.back());
  const double dl = out.length_d.value - out.length_d.error;
  if (out.length_g.upper() <= 128.0 * dl) {
    out.verdict = out.length_g.upper() <= 256.0 * out.k_lower_d ? Verdict::Confirmed : Verdict::PartialConfirm;
  } else if (out.length_g.value - out.length_g.error > 128.0 * out.length_d.upper()) {
    out.verdict = Verdict::Refuted;
    out.note = "pathwise inequality fails";
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

LemmaReport lemma34_suite(const Domain& domain, std::size_t trials, std::uint64_t seed, const GraphParams& graph,
                          const QuadratureParams& quad) {
  const Domain base = domain.base_domain();
  return run_trials("lemma34", trials, seed, [&](std::size_t, Rng& rng) {
    TrialRecord r;
    const auto [w1, w2] = sample_pair(domain, PairSampler::Uniform, rng);
    const NearGeodesicResult geo = near_geodesic(base, w1, w2, 2.0, graph, quad);
    const Lemma34Result res = lemma34_check(domain, geo.path, quad, geo.certified);
    r.verdict = res.verdict;
    r.note = res.note;
    r.lhs_lower = res.length_g.value - res.length_g.error;
    r.lhs_upper = res.length_g.upper();
    r.rhs = res.verdict == Verdict::PartialConfirm ? 128.0 * res.length_d.upper() : 256.0 * res.k_lower_d;
    return r;
  });
}

// ---------------------------------------------------------------------------------------

bool lemma35_check(double dd_w1, double dd_w2, double dist, double c) {
  if (!(c >= 2.0)) throw InvalidArgument("c must be at least 2");
  if (!(dd_w1 > 0.0 && dd_w2 > 0.0 && dist > 0.0)) throw InvalidArgument("distances must be positive");
  const double tol = 8.0 * kEps;
  if (std::abs(dd_w1 - dd_w2) > dist * (1.0 + tol) + tol * std::max(dd_w1, dd_w2)) {
    throw InvalidArgument("inputs violate the 1-Lipschitz bound of the boundary distance");
  }
  if (dist < dd_w1 / c * (1.0 - tol)) throw InvalidArgument("hypothesis |w1 - w2| >= d_D(w1)/c fails");
  return dist * (1.0 + tol) >= dd_w2 / (c + 1.0);
}

LemmaReport lemma35_suite(const Domain& domain, std::size_t trials, const std::vector<double>& cs,
                          std::uint64_t seed) {
  if (cs.empty()) throw InvalidArgument("lemma 3.5 needs at least one constant");
  const Domain base = domain.base_domain();
  return run_trials("lemma35", trials, seed, [&](std::size_t i, Rng& rng) {
    const double c = cs[i % cs.size()];
    for (int k = 0; k < kMaxRedraws; ++k) {
      const Vector w1 = sample_point(base, rng);
      const double d1 = base.clearance(w1);
      const double stretch = rng.uniform() < 0.2 ? 1.0 : 1.0 + rng.log_uniform(1e-6, 10.0);
      const Vector w2 = w1 + sample_direction(base.space(), rng) * (stretch * d1 / c);
      const double d2 = base.clearance(w2);
      const double dist = distance(base.space(), w1, w2);
      if (!(d2 > 0.0) || dist < d1 / c) continue;
      TrialRecord r;
      r.lhs_lower = r.lhs_upper = d2 / (c + 1.0);
      r.rhs = dist;
      r.verdict = lemma35_check(d1, d2, dist, c) ? Verdict::Confirmed : Verdict::Refuted;
      r.note = "c=" + std::to_string(c);
      return r;
    }
    throw InfeasibleError("could not draw a hypothesis-satisfying triple");
  });
}

}  // namespace qh
