#include <algorithm>
#include <cmath>

#include "qh/analysis.hpp"
#include "qh/error.hpp"
#include "trials.hpp"

namespace qh {

namespace {

double ratio_t(const Domain& domain, const Vector& z1, const Vector& z2) {
  const double dist = distance(domain.space(), z1, z2);
  if (dist == 0.0) return 0.0;
  return dist / std::min(domain.clearance(z1), domain.clearance(z2));
}

}  // namespace

std::vector<ProfileSample> profile_samples(const Domain& domain, PairSampler sampler, std::size_t count,
                                           std::uint64_t seed, const GraphParams& graph,
                                           const QuadratureParams& quad) {
  if (count < 1) throw InvalidArgument("profile needs at least one pair");
  std::vector<ProfileSample> out(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const auto [z1, z2] = sample_pair(domain, sampler, rng, i);
    const DistanceBracket br = k_bracket(domain, z1, z2, graph, quad);
    out[i] = {ratio_t(domain, z1, z2), br.lower, br.upper, j_metric(domain, z1, z2)};
  });
  return out;
}

PsiSpec envelope_of(const std::vector<ProfileSample>& samples, std::size_t bins, std::vector<double>* edges) {
  if (bins < 1) throw InvalidArgument("envelope needs at least one bin");
  double lo = kInf;
  double hi = 0.0;
  for (const ProfileSample& s : samples) {
    if (s.t > 0.0) {
      lo = std::min(lo, s.t);
      hi = std::max(hi, s.t);
    }
  }
  if (!(lo < kInf)) throw InvalidArgument("envelope needs a sample with t > 0");
  // The last edge sits just above the largest sample so that it lies inside the range.
  const double end = hi > lo ? std::nextafter(hi, kInf) : 2.0 * lo;
  std::vector<double> e(bins + 1);
  const double log_lo = std::log(lo);
  const double step = (std::log(end) - log_lo) / static_cast<double>(bins);
  e.front() = lo;
  for (std::size_t i = 1; i < bins; ++i) e[i] = std::exp(log_lo + step * static_cast<double>(i));
  e.back() = end;

  std::vector<double> values(bins, 0.0);
  for (const ProfileSample& s : samples) {
    if (!(s.t > 0.0)) continue;
    auto it = std::upper_bound(e.begin(), e.end() - 1, s.t);
    const auto bin = static_cast<std::size_t>(it - e.begin()) - 1;
    values[bin] = std::max(values[bin], s.k_up);
  }
  for (std::size_t i = 1; i < bins; ++i) values[i] = std::max(values[i], values[i - 1]);
  std::vector<double> knots(e.begin(), e.end() - 1);
  if (edges) *edges = e;
  return PsiSpec::tabulated(std::move(knots), std::move(values), end);
}

PsiProfile psi_profile(const Domain& domain, PairSampler sampler, std::size_t count, std::uint64_t seed,
                       const GraphParams& graph, const QuadratureParams& quad) {
  PsiProfile out;
  out.samples = profile_samples(domain, sampler, count, seed, graph, quad);
  out.envelope = envelope_of(out.samples, kEnvelopeBins, &out.bin_edges);
  return out;
}

UniformityProfile uniformity_of(std::vector<ProfileSample> samples) {
  UniformityProfile out;
  out.samples = std::move(samples);
  double sj = 0.0;
  double sk = 0.0;
  double sjj = 0.0;
  double sjk = 0.0;
  std::size_t m = 0;
  for (const ProfileSample& s : out.samples) {
    if (!(s.j_val > 0.0)) {
      ++out.skipped;
      continue;
    }
    const double ratio = s.k_up / s.j_val;
    out.max_ratio = std::max(out.max_ratio, ratio);
    out.min_ratio = std::min(out.min_ratio, ratio);
    sj += s.j_val;
    sk += s.k_up;
    sjj += s.j_val * s.j_val;
    sjk += s.j_val * s.k_up;
    ++m;
  }
  if (m == 0) return out;
  const double mm = static_cast<double>(m);
  const double denom = mm * sjj - sj * sj;
  if (m >= 2 && denom > 1e-12 * mm * sjj && std::isfinite(sk)) {
    out.slope = (mm * sjk - sj * sk) / denom;
  } else {
    out.slope = out.max_ratio;
  }
  out.intercept = -kInf;
  for (const ProfileSample& s : out.samples) {
    if (s.j_val > 0.0) out.intercept = std::max(out.intercept, s.k_up - out.slope * s.j_val);
  }
  return out;
}

UniformityProfile uniformity_profile(const Domain& domain, PairSampler sampler, std::size_t count,
                                     std::uint64_t seed, const GraphParams& graph, const QuadratureParams& quad) {
  return uniformity_of(profile_samples(domain, sampler, count, seed, graph, quad));
}

// ---------------------------------------------------------------------------------------

namespace {

TrialRecord gauge_trial(const Domain& domain, const Vector& z1, const Vector& z2, const PsiSpec& psi,
                        double factor, double scale, const GraphParams& graph, const QuadratureParams& quad) {
  if (z1 == z2) {
    TrialRecord r;
    r.verdict = Verdict::Confirmed;
    return r;
  }
  const double t = ratio_t(domain, z1, z2);
  const auto g = psi.evaluate(scale * t);
  if (!g) {
    TrialRecord r;
    r.lhs_lower = k_lower(domain, z1, z2);
    r.lhs_upper = kInf;
    r.rhs = kInf;
    r.verdict = Verdict::Inconclusive;
    r.note = "t outside the gauge range";
    return r;
  }
  TrialRecord r = detail::bracket_trial(domain, z1, z2, factor * *g, graph, quad);
  r.note = "t=" + std::to_string(t);
  return r;
}

}  // namespace

LemmaReport theorem11_forward_check(const Domain& domain, const PsiSpec& psi, PairSampler sampler,
                                    std::size_t pairs, std::uint64_t seed, const GraphParams& graph,
                                    const QuadratureParams& quad) {
  return detail::run_trials("theorem11.forward", pairs, seed, [&](std::size_t i, Rng& rng) {
    const auto [z1, z2] = sample_pair(domain, sampler, rng, i);
    return gauge_trial(domain, z1, z2, psi, kForwardFactor, 1.0, graph, quad);
  });
}

LemmaReport theorem11_backward_check(const Domain& domain, const PsiSpec& psi1, PairSampler sampler,
                                     std::size_t pairs, std::uint64_t seed, const GraphParams& graph,
                                     const QuadratureParams& quad) {
  const Domain base = domain.base_domain();
  return detail::run_trials("theorem11.backward", pairs, seed, [&](std::size_t i, Rng& rng) {
    const auto [z1, z2] = sample_pair(base, sampler, rng, i);
    return gauge_trial(base, z1, z2, psi1, kBackwardFactor, kBackwardScale, graph, quad);
  });
}

// ---------------------------------------------------------------------------------------

DoubleConeResult double_cone_check(const Domain& domain, const Polyline& path, double c) {
  if (!(c >= 1.0)) throw InvalidArgument("cone constant must be at least 1");
  const auto& v = path.vertices();
  const NormSpec& space = domain.space();
  for (const Vector& z : v) domain.require_conforms(z);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (!segment_inside(domain, v[k], v[k + 1])) throw GeometryError("path leaves the domain");
  }
  std::vector<double> prefix(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) prefix[k] = prefix[k - 1] + distance(space, v[k - 1], v[k]);
  const double total = prefix.back();
  const double chord = distance(space, v.front(), v.back());

  DoubleConeResult out;
  out.length_ratio = chord > 0.0 ? total / chord : (total > 0.0 ? kInf : 1.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double arm = std::min(prefix[k], total - prefix[k]);
    if (arm > 0.0) out.cone_ratio = std::max(out.cone_ratio, arm / domain.clearance(v[k]));
  }
  out.minimal_c = std::max({1.0, out.length_ratio, out.cone_ratio});
  out.pass = out.minimal_c <= c;
  return out;
}

}  // namespace qh
