#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "qh/analysis.hpp"
#include "qh/error.hpp"

namespace qh {
namespace {

using testing::point_in_ball;
using testing::unit_ball;
using testing::upper_half_space;

const NormSpec kE2 = NormSpec::euclidean(2);

const Domain& punctured_disk() {
  static const Domain g = [] {
    const Domain d = unit_ball(kE2);
    return d.with_punctures(generate_separated_punctures(d, 0.5, 20, 2024));
  }();
  return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, k / (n - 1.0)));
  return g;
}

// ---------------------------------------------------------------------------------------

TEST(PsiSpec, ParametricForm) {
  const PsiSpec psi = PsiSpec::parametric(2.0, 3.0);
  EXPECT_EQ(psi(0.0), 0.0);
  EXPECT_NEAR(psi(1.0), 2.0 * std::log(4.0), 1e-15);
  EXPECT_TRUE(psi.in_range(1e300));
  EXPECT_THROW(PsiSpec::parametric(0.0, 1.0), InvalidArgument);
}

TEST(PsiSpec, TabulatedStepIsRightContinuous) {
  const PsiSpec psi = PsiSpec::tabulated({1.0, 2.0, 4.0}, {0.5, 1.0, 3.0}, 8.0);
  EXPECT_EQ(*psi.evaluate(1.0), 0.5);
  EXPECT_EQ(*psi.evaluate(1.999), 0.5);
  EXPECT_EQ(*psi.evaluate(2.0), 1.0);
  EXPECT_EQ(*psi.evaluate(7.9), 3.0);
  EXPECT_EQ(*psi.evaluate(0.0), 0.0);
  EXPECT_FALSE(psi.evaluate(0.5).has_value());
  EXPECT_FALSE(psi.evaluate(8.0).has_value());
  EXPECT_THROW(psi(9.0), InvalidArgument);
  EXPECT_THROW(PsiSpec::tabulated({1.0, 1.0}, {0.0, 1.0}, 2.0), InvalidArgument);
  EXPECT_THROW(PsiSpec::tabulated({1.0, 2.0}, {1.0, 0.5}, 3.0), InvalidArgument);
  EXPECT_THROW(PsiSpec::tabulated({1.0, 2.0}, {0.5, 1.0}, 2.0), InvalidArgument);
}

TEST(PsiSpec, RescalingComposes) {
  const PsiSpec psi = PsiSpec::tabulated({1.0, 2.0}, {1.0, 2.0}, 4.0);
  const PsiSpec s = psi.rescaled(3.0, 0.5);
  EXPECT_EQ(*s.evaluate(2.0), 3.0);
  EXPECT_EQ(*s.evaluate(4.0), 6.0);
  EXPECT_FALSE(s.evaluate(8.0).has_value());
}

TEST(PsiAdmissible, Examples) {
  const auto grid = log_grid(1e-6, 1e6, 241);
  EXPECT_TRUE(psi_admissible(PsiSpec::parametric(2.0, 1.0), grid));
  EXPECT_FALSE(psi_admissible(PsiSpec::parametric(0.5, 1.0), {1e-3}));
  EXPECT_TRUE(psi_admissible(PsiSpec::parametric(1.0, 1.0), grid));
  EXPECT_THROW(psi_admissible(PsiSpec::parametric(1.0, 1.0), {0.0}), InvalidArgument);
}

TEST(EquivalenceApply, IdentityAndScaling) {
  const auto grid = log_grid(1e-3, 1e3, 61);
  const PsiSpec psi = PsiSpec::parametric(1.0, 1.0);
  const EquivalenceResult id = equivalence_apply(psi, 1.0, 1.0, 1.0, 1.0, grid);
  EXPECT_TRUE(id.consistent);
  for (double t : grid) EXPECT_EQ(id.psi1(t), psi(t));
  const EquivalenceResult big = equivalence_apply(psi, 4096.0, 1.0, 3.0, 128.0, grid);
  for (double t : grid) EXPECT_NEAR(big.psi1(t), 4096.0 * std::log1p(t), 1e-9 * big.psi1(t));
  // The paired relation psi(t) = 3 psi1(128 t) is reported, not assumed.
  EXPECT_FALSE(big.consistent);
  EXPECT_EQ(big.conflicts.size(), grid.size());
  const PsiSpec tab = PsiSpec::tabulated({1.0, 2.0, 4.0}, {0.5, 1.0, 3.0}, 8.0);
  EXPECT_TRUE(equivalence_apply(tab, 1.0, 1.0, 1.0, 1.0, {1.0, 1.5, 2.0, 3.0, 7.0}).consistent);
  EXPECT_THROW(equivalence_apply(psi, 0.0, 1.0, 1.0, 1.0, grid), InvalidArgument);
}

// ---------------------------------------------------------------------------------------

TEST(Separation, Examples) {
  const Domain d = unit_ball(kE2);
  EXPECT_EQ(check_separation(d, {{{0.3, 0.2}}}, 0.5).overall, SeparationStatus::Confirmed);
  const SeparationReport two = check_separation(d, {{{-0.4, 0.0}, {0.4, 0.0}}}, 0.5);
  ASSERT_EQ(two.pairs.size(), 1u);
  EXPECT_EQ(two.overall, SeparationStatus::Confirmed);
  EXPECT_NEAR(two.pairs[0].lower, std::log(1.0 + 0.8 / 0.6), 1e-12);
  const SeparationReport close = check_separation(d, {{{0.0, 0.0}, {1e-6, 0.0}}}, 0.5);
  EXPECT_EQ(close.overall, SeparationStatus::Refuted);
  EXPECT_LT(close.pairs[0].upper, 0.5);
}

TEST(SeparationProperty, StatusesFollowTheBracket) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    Rng rng(derive_seed(41, c));
    PunctureSet p;
    for (int k = 0; k < 5; ++k) p.points.push_back(point_in_ball(kE2, rng, Vector(2), 0.9));
    const double kappa = rng.uniform(0.1, 2.0);
    const SeparationReport rep = check_separation(unit_ball(kE2), p, kappa);
    EXPECT_EQ(rep.pairs.size(), 10u);
    for (const SeparationPair& s : rep.pairs) {
      EXPECT_LE(s.lower, s.upper);
      const SeparationStatus expect = s.lower >= kappa  ? SeparationStatus::Confirmed
                                      : s.upper < kappa ? SeparationStatus::Refuted
                                                        : SeparationStatus::Undecided;
      EXPECT_EQ(s.status, expect) << "case " << c;
    }
  }
}

TEST(SeparationProperty, LargerBudgetsNeverFlipADecidedPair) {
  Rng rng(42);
  PunctureSet p;
  for (int k = 0; k < 6; ++k) p.points.push_back(point_in_ball(kE2, rng, Vector(2), 0.9));
  GraphParams small;
  small.node_budget = 40;
  small.refine_rounds = 0;
  const SeparationReport a = check_separation(unit_ball(kE2), p, 1.0, small);
  const SeparationReport b = check_separation(unit_ball(kE2), p, 1.0);
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    if (a.pairs[k].status != SeparationStatus::Undecided) EXPECT_EQ(a.pairs[k].status, b.pairs[k].status);
  }
}

TEST(Separation, WholeSpaceHasNoBaseDistance) {
  const Domain w(kE2, WholeSpace{}, {{{0.0, 0.0}, {1.0, 0.0}}});
  EXPECT_THROW(check_separation(w, w.punctures(), 0.5), InvalidArgument);
}

// ---------------------------------------------------------------------------------------

TEST(Sampling, PairsLieInTheDomain) {
  const Domain& g = punctured_disk();
  for (PairSampler s : {PairSampler::Uniform, PairSampler::PunctureAdjacent, PairSampler::BoundaryAdjacent,
                        PairSampler::Mixed}) {
    Rng rng(43);
    for (std::size_t i = 0; i < 200; ++i) {
      const auto [a, b] = sample_pair(g, s, rng, i);
      EXPECT_GT(g.clearance(a), 0.0) << to_string(s);
      EXPECT_GT(g.clearance(b), 0.0) << to_string(s);
    }
  }
  Rng rng(44);
  EXPECT_THROW(sample_pair(g, PairSampler::Axial, rng), InvalidArgument);
  const auto [a, b] = sample_pair(upper_half_space(kE2), PairSampler::Axial, rng);
  EXPECT_EQ(a[0], b[0]);
}

TEST(Sampling, SamplerNamesRoundTrip) {
  for (PairSampler s : {PairSampler::Uniform, PairSampler::PunctureAdjacent, PairSampler::BoundaryAdjacent,
                        PairSampler::Axial, PairSampler::Mixed}) {
    EXPECT_EQ(parse_pair_sampler(to_string(s)), s);
  }
  EXPECT_THROW(parse_pair_sampler("gaussian"), InvalidArgument);
}

TEST(Sampling, DirectionsHaveUnitNorm) {
  Rng rng(45);
  for (double p : testing::kExponents) {
    const NormSpec space(3, p);
    for (int k = 0; k < 50; ++k) EXPECT_NEAR(norm(space, sample_direction(space, rng)), 1.0, 1e-14);
  }
}

// ---------------------------------------------------------------------------------------

TEST(PunctureBallSuite, UnpuncturedDomainIsVacuous) {
  const Lemma31Report r = lemma31_suite(unit_ball(kE2), 50, 1);
  EXPECT_EQ(r.at_most_one.refuted, 0u);
  EXPECT_EQ(r.exactly_one.refuted, 0u);
  EXPECT_EQ(r.nearest_constant.refuted, 0u);
  for (const TrialRecord& t : r.at_most_one.records) EXPECT_EQ(t.lhs_upper, 0.0);
}

TEST(PunctureBallSuite, SeparatedPuncturesGiveNoViolations) {
  const Lemma31Report r = lemma31_suite(punctured_disk(), 300, 2);
  for (const LemmaReport* rep : {&r.at_most_one, &r.exactly_one, &r.nearest_constant}) {
    EXPECT_EQ(rep->trials, 300u);
    EXPECT_EQ(rep->refuted, 0u) << rep->id;
    EXPECT_EQ(rep->confirmed, 300u) << rep->id;
  }
  // The first trial probes lambda = 0.22, just below the threshold.
  EXPECT_LE(r.at_most_one.records[0].lhs_upper, 1.0);
}

TEST(JComparison, CoincidentPairAndGating) {
  const Domain g = unit_ball(kE2, {{{0.5, 0.0}}});
  const Lemma32Config same{{0.501, 0.0}, {0.501, 0.0}, 1.0 / 32};
  EXPECT_TRUE(lemma32_hypotheses(g, same));
  EXPECT_EQ(lemma32_trial(g, same, {}, {}).verdict, Verdict::Confirmed);
  const Lemma32Config wide{{0.501, 0.0}, {0.502, 0.0}, 1.0 / 16};
  EXPECT_FALSE(lemma32_hypotheses(g, wide));
  EXPECT_EQ(lemma32_trial(g, wide, {}, {}).verdict, Verdict::PreconditionFailed);
  const Lemma32Config far{{0.501, 0.0}, {0.3, 0.0}, 1.0 / 32};
  EXPECT_FALSE(lemma32_hypotheses(g, far));
}

TEST(JComparison, SampledConfigurationsSatisfyTheHypotheses) {
  Rng rng(46);
  for (int k = 0; k < 200; ++k) {
    const Lemma32Config c = sample_lemma32_config(punctured_disk(), rng);
    EXPECT_TRUE(lemma32_hypotheses(punctured_disk(), c));
    EXPECT_GT(c.mu, 0.0);
    EXPECT_LE(c.mu, 1.0 / 32);
  }
  EXPECT_THROW(sample_lemma32_config(unit_ball(kE2), rng), InfeasibleError);
}

TEST(JComparison, NoRefutations) {
  const LemmaReport r = lemma32_check(punctured_disk(), 40, 3);
  EXPECT_EQ(r.refuted, 0u);
  EXPECT_EQ(r.precondition_failed, 0u);
  EXPECT_GE(r.confirmed, 36u);
}

TEST(AuxiliaryPuncture, ExplicitInstance) {
  const Domain g = unit_ball(kE2, {{{1.0 / 128, 0.0}}});
  const TrialRecord r = lemma33_trial({g, Vector(2), {1.0 / 32, 0.0}}, {}, {});
  EXPECT_EQ(r.verdict, Verdict::Confirmed);
  EXPECT_NEAR(r.rhs, 512.0 * k_lower(g.base_domain(), Vector(2), {1.0 / 32, 0.0}), 1e-12);
}

TEST(AuxiliaryPuncture, BuilderPlacesThePuncture) {
  Rng rng(47);
  for (int k = 0; k < 10; ++k) {
    const Lemma33Instance inst = build_lemma33_instance(punctured_disk(), rng);
    const Domain base = inst.domain.base_domain();
    const double dd = base.clearance(inst.w1);
    EXPECT_NEAR(inst.domain.clearance(inst.w1), dd / 128, 1e-12 * dd);
    EXPECT_NEAR(distance(kE2, inst.w1, inst.w2), dd / 32, 1e-12 * dd);
    EXPECT_EQ(inst.domain.punctures().size(), punctured_disk().punctures().size() + 1);
  }
}

TEST(AuxiliaryPuncture, EveryNormHoldsUp) {
  for (double p : {1.0, kInf}) {
    const Domain d = unit_ball(NormSpec(2, p));
    const Domain g = d.with_punctures(generate_separated_punctures(d, 0.5, 8, 5));
    const LemmaReport r = lemma33_check(g, 10, 4);
    EXPECT_EQ(r.refuted, 0u) << "p=" << p;
    EXPECT_EQ(r.confirmed, 10u) << "p=" << p;
  }
  EXPECT_THROW(lemma33_check(Domain(kE2, WholeSpace{}, {{{0.0, 0.0}}}), 1, 1), InfeasibleError);
}

TEST(PathwiseComparison, Examples) {
  const Polyline path({{-0.5, 0.1}, {0.0, 0.4}, {0.5, 0.1}});
  const Lemma34Result plain = lemma34_check(unit_ball(kE2), path);
  EXPECT_EQ(plain.length_g.value, plain.length_d.value);
  EXPECT_NE(plain.verdict, Verdict::Refuted);
  EXPECT_NE(plain.verdict, Verdict::PreconditionFailed);

  const Domain g = unit_ball(kE2, {{{0.0, -0.3}}});
  const Lemma34Result clear = lemma34_check(g, path);
  EXPECT_LE(clear.length_g.upper(), 128.0 * clear.length_d.value);
  EXPECT_TRUE(clear.verdict == Verdict::Confirmed || clear.verdict == Verdict::PartialConfirm);

  // A puncture at d_D/256 from a vertex.
  const Vector v{0.0, 0.4};
  const Domain tight = unit_ball(kE2, {{{0.0, 0.4 + 0.6 / 256}}});
  EXPECT_EQ(lemma34_check(tight, path).verdict, Verdict::PreconditionFailed);
}

TEST(PathwiseComparison, SuiteHasNoRefutations) {
  const LemmaReport r = lemma34_suite(punctured_disk(), 10, 5);
  EXPECT_EQ(r.refuted, 0u);
}

TEST(ClearanceGrowth, Examples) {
  // dist = d/c with the maximal growth d2 = d1 + dist leaves no slack at all.
  const double d1 = 0.6, c = 2.0, dist = d1 / c;
  EXPECT_TRUE(lemma35_check(d1, d1 + dist, dist, c));
  EXPECT_THROW(lemma35_check(d1, d1, 0.0, c), InvalidArgument);
  EXPECT_THROW(lemma35_check(d1, d1, dist, 1.5), InvalidArgument);
  EXPECT_THROW(lemma35_check(d1, 2.0, dist, c), InvalidArgument);
  EXPECT_THROW(lemma35_check(d1, d1, 0.1, c), InvalidArgument);
}

TEST(ClearanceGrowth, SuiteHasNoViolations) {
  const LemmaReport r = lemma35_suite(unit_ball(kE2), 1000, {2.0}, 6);
  EXPECT_EQ(r.refuted, 0u);
  EXPECT_EQ(r.confirmed, 1000u);
  EXPECT_GE(r.worst_slack, -1e-12);
}

TEST(LemmaReport, WorstSlackSkipsGatedTrials) {
  LemmaReport r;
  r.add({0, 1.0, 2.0, 3.0, Verdict::Confirmed, ""});
  r.add({1, 0.0, 0.0, -5.0, Verdict::PreconditionFailed, ""});
  r.add({2, 1.0, 4.0, 3.5, Verdict::Inconclusive, ""});
  EXPECT_EQ(r.trials, 3u);
  EXPECT_EQ(r.confirmed, 1u);
  EXPECT_EQ(r.precondition_failed, 1u);
  EXPECT_EQ(r.inconclusive, 1u);
  EXPECT_EQ(r.worst_slack, -0.5);
}

// ---------------------------------------------------------------------------------------

TEST(Profiles, EnvelopeIsMonotone) {
  Rng rng(48);
  std::vector<ProfileSample> samples;
  for (int k = 0; k < 500; ++k) {
    const double t = rng.log_uniform(1e-3, 1e3);
    const double up = std::log1p(t) * rng.uniform(1.0, 3.0);
    samples.push_back({t, up / 2, up, std::log1p(t)});
  }
  std::vector<double> edges;
  const PsiSpec env = envelope_of(samples, kEnvelopeBins, &edges);
  EXPECT_EQ(edges.size(), kEnvelopeBins + 1);
  for (std::size_t k = 1; k < env.values().size(); ++k) EXPECT_GE(env.values()[k], env.values()[k - 1]);
  for (const ProfileSample& s : samples) EXPECT_GE(env(s.t), s.k_up);
}

TEST(Profiles, HalfSpaceAxialPairsAreExact) {
  const UniformityProfile u = uniformity_profile(upper_half_space(kE2), PairSampler::Axial, 60, 7);
  EXPECT_LE(u.max_ratio, 1.0 + 1e-6);
  EXPECT_GE(u.min_ratio, 1.0 - 1e-9);
  const PsiProfile p = psi_profile(upper_half_space(kE2), PairSampler::Axial, 60, 7);
  for (const ProfileSample& s : p.samples) EXPECT_LE(s.k_up, std::log1p(s.t) * (1.0 + 1e-6));
}

TEST(Profiles, RatioIsAtLeastOne) {
  const UniformityProfile u = uniformity_profile(punctured_disk(), PairSampler::Mixed, 60, 8);
  EXPECT_GE(u.min_ratio, 1.0 - 1e-12);
  for (const ProfileSample& s : u.samples) {
    EXPECT_LE(s.k_low, s.k_up);
    EXPECT_LE(s.k_up, u.slope * s.j_val + u.intercept + 1e-12);
  }
}

TEST(Profiles, PunctureAdjacentPairsInflateTheGauge) {
  const PsiProfile p = psi_profile(punctured_disk(), PairSampler::PunctureAdjacent, 40, 9);
  double worst = 0.0;
  for (const ProfileSample& s : p.samples) worst = std::max(worst, s.k_up / std::log1p(s.t));
  EXPECT_GT(worst, 1.5);
}

TEST(Profiles, DiskWithoutPuncturesFitsTwiceLog) {
  const PsiProfile p = psi_profile(unit_ball(kE2), PairSampler::Uniform, 100, 10);
  for (const ProfileSample& s : p.samples) EXPECT_LE(s.k_up, 2.0 * std::log1p(s.t));
}

// ---------------------------------------------------------------------------------------

TEST(Transfer, ForwardOnThePuncturedDisk) {
  const LemmaReport r = theorem11_forward_check(punctured_disk(), PsiSpec::parametric(2.0, 1.0),
                                                PairSampler::Mixed, 30, 11);
  EXPECT_EQ(r.refuted, 0u);
  EXPECT_EQ(r.confirmed, 30u);
  for (const TrialRecord& t : r.records) EXPECT_GT(t.rhs, 0.0);
}

TEST(Transfer, BackwardFlagsTheGaugeRange) {
  // psi1 only covers t in [1, 2); 2^7 t leaves that range for every sampled pair.
  const PsiSpec narrow = PsiSpec::tabulated({1.0}, {100.0}, 2.0);
  const LemmaReport r = theorem11_backward_check(punctured_disk(), narrow, PairSampler::Uniform, 10, 12);
  EXPECT_EQ(r.inconclusive, 10u);
  EXPECT_EQ(r.records[0].note, "t outside the gauge range");
}

TEST(Transfer, BackwardWithoutPuncturesIsTrivial) {
  const Domain d = unit_ball(kE2);
  const PsiProfile prof = psi_profile(d, PairSampler::Uniform, 80, 13);
  const LemmaReport r = theorem11_backward_check(d, prof.envelope, PairSampler::Uniform, 20, 14);
  EXPECT_EQ(r.refuted, 0u);
}

TEST(DoubleCone, DiameterSegment) {
  std::vector<Vector> vs;
  for (int k = 0; k <= 18; ++k) vs.push_back({-0.9 + 0.1 * k, 0.0});
  const DoubleConeResult r = double_cone_check(unit_ball(kE2), Polyline(vs), 2.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.length_ratio, 1.0, 1e-12);
  EXPECT_LE(r.cone_ratio, 1.0);
  EXPECT_NEAR(r.minimal_c, 1.0, 1e-12);
}

TEST(DoubleCone, ShortCentralSegmentAndCorridor) {
  const DoubleConeResult mid = double_cone_check(unit_ball(kE2), Polyline({{-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}}), 2.0);
  EXPECT_LT(mid.minimal_c, 2.0);
  const Polyline hug({{-0.9, 0.0}, {-0.6, 0.799}, {0.0, 0.999}, {0.6, 0.799}, {0.9, 0.0}});
  const DoubleConeResult corridor = double_cone_check(unit_ball(kE2), hug, 2.0);
  EXPECT_FALSE(corridor.pass);
  EXPECT_GT(corridor.minimal_c, 100.0);
}

// ---------------------------------------------------------------------------------------

TEST(AnnularNet, UnitRadiusInstance) {
  const CountNonPsiInstance inst = countnonpsi_build(1.0, 10);
  EXPECT_EQ(inst.a, Vector({1.1, 0.0}));
  EXPECT_EQ(inst.b, Vector({0.9, 0.0}));
  EXPECT_GT(norm(kE2, inst.a), 1.05);
  EXPECT_LT(norm(kE2, inst.b), 1.0);
  EXPECT_TRUE(inst.covering_verified);
  EXPECT_LT(inst.covering_sup, 1.0 / 200);
  EXPECT_GE(inst.k_lower_bound, 10.0);
  EXPECT_GT(inst.net.size(), 1000u);
  for (const Vector& x : inst.net.points) {
    EXPECT_GE(norm(kE2, x), 1.0);
    EXPECT_LT(norm(kE2, x), 1.05);
  }
  // Mid-annulus probe: the net is within r/200.
  const Domain w(kE2, WholeSpace{}, inst.net);
  EXPECT_LT(w.nearest_puncture(Vector({0.0, 1.025}).coords()).distance, 1.0 / 200);
}

TEST(AnnularNet, SparseNetFailsVerification) {
  CountNonPsiInstance inst = countnonpsi_build(1.0, 10);
  inst.net.points.resize(1);
  countnonpsi_verify(inst);
  EXPECT_FALSE(inst.covering_verified);
  EXPECT_THROW(countnonpsi_lower_bound(inst), CoveringError);
  EXPECT_THROW(countnonpsi_build(1.0, 9), InvalidArgument);
}

TEST(AnnularNet, AggregateWitness) {
  const std::vector<CountNonPsiRow> rows = countnonpsi_aggregate(10, 11);
  ASSERT_EQ(rows.size(), 2u);
  for (const CountNonPsiRow& row : rows) {
    EXPECT_EQ(row.r, std::ldexp(1.0, -row.j));
    EXPECT_TRUE(row.covering_verified);
    EXPECT_GE(row.k_lower_bound, row.j);
    EXPECT_LE(row.t, 6.0);
    // |a - b| = r/5 and d_G >= r/20 at both probe points.
    EXPECT_LE(row.t, (row.r / 5) / (row.r / 20) * (1.0 + 1e-12));
  }
  EXPECT_THROW(countnonpsi_aggregate(9, 12), InvalidArgument);
  EXPECT_THROW(countnonpsi_aggregate(10, 15), InvalidArgument);
}

}  // namespace
}  // namespace qh
