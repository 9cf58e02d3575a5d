#include <algorithm>
#include <cmath>

#include "qh/analysis.hpp"
#include "qh/error.hpp"

namespace qh {

PsiSpec PsiSpec::parametric(double a, double b) {
  if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))) {
    throw InvalidArgument("parametric gauge needs a > 0 and b > 0");
  }
  PsiSpec psi;
  psi.a_ = a;
  psi.b_ = b;
  return psi;
}

PsiSpec PsiSpec::tabulated(std::vector<double> knots, std::vector<double> values, double range_end) {
  if (knots.empty() || knots.size() != values.size()) {
    throw InvalidArgument("tabulated gauge needs matching, nonempty knots and values");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0) || !std::isfinite(knots[i])) throw InvalidArgument("gauge knots must be positive");
    if (!(values[i] >= 0.0)) throw InvalidArgument("gauge values must be >= 0");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw InvalidArgument("gauge knots must increase strictly");
    if (i > 0 && values[i] < values[i - 1]) throw InvalidArgument("gauge values must not decrease");
  }
  if (!(range_end > knots.back())) throw InvalidArgument("gauge range must end after the last knot");
  PsiSpec psi;
  psi.tabulated_ = true;
  psi.knots_ = std::move(knots);
  psi.values_ = std::move(values);
  psi.end_ = range_end;
  return psi;
}

double PsiSpec::range_begin() const noexcept { return tabulated_ ? knots_.front() : 0.0; }

double PsiSpec::range_end() const noexcept { return end_; }

bool PsiSpec::in_range(double t) const noexcept {
  if (t == 0.0) return true;
  if (!tabulated_) return t > 0.0 && t < kInf;
  return t >= knots_.front() && t < end_;
}

std::optional<double> PsiSpec::evaluate(double t) const noexcept {
  if (t == 0.0) return 0.0;
  if (!in_range(t)) return std::nullopt;
  if (!tabulated_) return a_ * std::log1p(b_ * t);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double PsiSpec::operator()(double t) const {
  const auto v = evaluate(t);
  if (!v) throw InvalidArgument("t = " + std::to_string(t) + " is outside the gauge range");
  return *v;
}

PsiSpec PsiSpec::rescaled(double s, double u) const {
  if (!(s > 0.0 && u > 0.0)) throw InvalidArgument("gauge rescaling needs positive constants");
  if (!tabulated_) return parametric(s * a_, u * b_);
  std::vector<double> knots(knots_.size());
  std::vector<double> values(values_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    knots[i] = knots_[i] / u;
    values[i] = s * values_[i];
  }
  return tabulated(std::move(knots), std::move(values), end_ / u);
}

bool psi_admissible(const PsiSpec& psi, const std::vector<double>& grid) {
  for (double t : grid) {
    if (!(t > 0.0)) throw InvalidArgument("admissibility grid must be positive");
    const auto v = psi.evaluate(t);
    if (!v || *v < std::log1p(t)) return false;
  }
  return true;
}

EquivalenceResult equivalence_apply(const PsiSpec& psi, double a1, double a2, double a3, double a4,
                                    const std::vector<double>& grid) {
  for (double a : {a1, a2, a3, a4}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("equivalence constants must be positive");
  }
  EquivalenceResult out{psi.rescaled(a1, a2), {}, 0.0, true};
  for (double t : grid) {
    const auto lhs = psi.evaluate(t);
    const auto rhs = out.psi1.evaluate(a4 * t);
    if (!lhs || !rhs) continue;
    const double rhs_v = a3 * *rhs;
    const double dev = std::abs(*lhs - rhs_v) / std::max({std::abs(*lhs), std::abs(rhs_v), 1e-300});
    out.max_rel_deviation = std::max(out.max_rel_deviation, dev);
    if (dev > 1e-12) out.conflicts.push_back(t);
  }
  out.consistent = out.conflicts.empty();
  return out;
}

}  // namespace qh
