#pragma once

// Shared trial driver for the lemma and transfer checks.

#include <string>
#include <vector>

#include "qh/analysis.hpp"
#include "qh/parallel.hpp"

namespace qh::detail {

inline constexpr int kMaxRedraws = 2000;

template <class Trial>
LemmaReport run_trials(const std::string& id, std::size_t trials, std::uint64_t seed, Trial&& trial) {
  std::vector<TrialRecord> records(trials);
  parallel_for(trials, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    records[i] = trial(i, rng);
    records[i].index = i;
  });
  LemmaReport report;
  report.id = id;
  for (TrialRecord& r : records) report.add(std::move(r));
  return report;
}

inline Verdict classify(double lower, double upper, double rhs) {
  if (upper <= rhs) return Verdict::Confirmed;
  if (lower > rhs) return Verdict::Refuted;
  return Verdict::Inconclusive;
}

// Bracket of k_G against a claimed bound, with one extra refinement round when undecided.
inline TrialRecord bracket_trial(const Domain& domain, const Vector& a, const Vector& b, double rhs,
                          const GraphParams& graph, const QuadratureParams& quad) {
  DistanceBracket br = k_bracket(domain, a, b, graph, quad);
  Verdict v = classify(br.lower, br.upper, rhs);
  if (v == Verdict::Inconclusive) {
    GraphParams more = graph;
    more.refine_rounds += 1;
    more.target_ratio = 1.0;
    br = k_bracket(domain, a, b, more, quad);
    v = classify(br.lower, br.upper, rhs);
  }
  TrialRecord r;
  r.lhs_lower = br.lower;
  r.lhs_upper = br.upper;
  r.rhs = rhs;
  r.verdict = v;
  return r;
}

}  // namespace qh::detail
