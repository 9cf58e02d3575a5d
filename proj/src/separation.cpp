#include <algorithm>

#include "qh/analysis.hpp"
#include "qh/error.hpp"
#include "qh/parallel.hpp"

namespace qh {

std::size_t SeparationReport::count(SeparationStatus s) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [s](const SeparationPair& p) { return p.status == s; }));
}

std::string to_string(SeparationStatus s) {
  switch (s) {
    case SeparationStatus::Confirmed: return "Confirmed";
    case SeparationStatus::Refuted: return "Refuted";
    case SeparationStatus::Undecided: return "Undecided";
  }
  return "Undecided";
}

namespace {

SeparationStatus classify(double lower, double upper, double kappa) {
  if (lower >= kappa) return SeparationStatus::Confirmed;
  if (upper < kappa) return SeparationStatus::Refuted;
  return SeparationStatus::Undecided;
}

}  // namespace

SeparationReport check_separation(const Domain& domain, const PunctureSet& punctures, double kappa,
                                  const GraphParams& graph, const QuadratureParams& quad) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (punctures.empty()) throw InvalidArgument("separation needs at least one puncture");
  graph.validate();
  quad.validate();
  const Domain base = domain.base_domain();
  for (const Vector& x : punctures.points) {
    base.require_conforms(x);
    if (!(base.clearance(x) > 0.0)) throw GeometryError("puncture outside the base domain");
  }

  SeparationReport report;
  report.kappa = kappa;
  const std::size_t m = punctures.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) report.pairs.push_back({i, j, 0.0, kInf, SeparationStatus::Undecided});
  }

  parallel_for(report.pairs.size(), [&](std::size_t k) {
    SeparationPair& pair = report.pairs[k];
    const Vector& a = punctures.points[pair.i];
    const Vector& b = punctures.points[pair.j];
    pair.lower = k_lower(base, a, b);
    if (pair.lower >= kappa) {
      pair.upper = k_upper_direct(base, a, b, quad).value_or(kInf);
    } else {
      DistanceBracket br = k_bracket(base, a, b, graph, quad);
      if (classify(br.lower, br.upper, kappa) == SeparationStatus::Undecided) {
        GraphParams more = graph;
        more.refine_rounds += 1;
        br = k_bracket(base, a, b, more, quad);
      }
      pair.upper = br.upper;
    }
    pair.status = classify(pair.lower, pair.upper, kappa);
  });

  report.overall = SeparationStatus::Confirmed;
  if (report.count(SeparationStatus::Refuted) > 0) {
    report.overall = SeparationStatus::Refuted;
  } else if (report.count(SeparationStatus::Undecided) > 0) {
    report.overall = SeparationStatus::Undecided;
  }
  return report;
}

PunctureSet generate_separated_punctures(const Domain& domain, double kappa, std::size_t count,
                                         std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const Domain base = domain.base_domain();
  Rng rng(seed);
  PunctureSet out;
  out.kappa = kappa;
  const std::size_t budget = 2000 * count;
  for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
    Vector x = sample_point(base, rng);
    bool ok = true;
    for (const Vector& y : out.points) {
      if (x == y || j_metric(base, x, y) < kappa) {
        ok = false;
        break;
      }
    }
    if (ok) out.points.push_back(std::move(x));
  }
  if (out.size() < count) {
    throw InfeasibleError("placed " + std::to_string(out.size()) + " of " + std::to_string(count) +
                          " separated punctures before the attempt budget ran out");
  }
  return out;
}

}  // namespace qh
