#pragma once

// Verification suite: puncture separation, the comparison lemmas for k_G and k_D,
// psi-uniformity and uniformity profiles, the removability transfer checks and the
// annular-net construction of a domain that is not psi-uniform.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qh/domains.hpp"
#include "qh/normed_space.hpp"
#include "qh/qh_metric.hpp"
#include "qh/random.hpp"

namespace qh {

// ---------------------------------------------------------------------------------------
// Gauges

/// Either a * log(1 + b t) or a right-continuous step function through tabulated knots.
/// A tabulated gauge is defined on [knots.front(), range_end()).
class PsiSpec {
 public:
  static PsiSpec parametric(double a, double b);
  /// knots strictly increasing and positive, values non-decreasing and nonnegative.
  /// The last step ends at range_end (> knots.back()).
  static PsiSpec tabulated(std::vector<double> knots, std::vector<double> values, double range_end);

  bool is_parametric() const noexcept { return tabulated_ == false; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double range_begin() const noexcept;
  double range_end() const noexcept;

  bool in_range(double t) const noexcept;
  /// psi(t); nullopt outside the tabulated range. psi(0) = 0 for both forms.
  std::optional<double> evaluate(double t) const noexcept;
  /// evaluate() or InvalidArgument when t is outside the range.
  double operator()(double t) const;

  /// s * psi(u t).
  PsiSpec rescaled(double s, double u) const;

 private:
  bool tabulated_ = false;
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
  double end_ = kInf;
};

/// psi(t) >= log(1 + t) on every grid point (grid values must be positive).
bool psi_admissible(const PsiSpec& psi, const std::vector<double>& grid);

struct EquivalenceResult {
  PsiSpec psi1;                  // a1 psi(a2 t)
  std::vector<double> conflicts; // grid points where psi(t) != a3 psi1(a4 t) beyond rounding
  double max_rel_deviation = 0.0;
  bool consistent = true;
};

/// psi1(t) = a1 psi(a2 t), plus a report of where psi(t) = a3 psi1(a4 t) fails on the grid.
EquivalenceResult equivalence_apply(const PsiSpec& psi, double a1, double a2, double a3, double a4,
                                    const std::vector<double>& grid);

// ---------------------------------------------------------------------------------------
// Separation

enum class SeparationStatus { Confirmed, Refuted, Undecided };

struct SeparationPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double lower = 0.0;
  double upper = kInf;
  SeparationStatus status = SeparationStatus::Undecided;
};

struct SeparationReport {
  double kappa = 0.5;
  std::vector<SeparationPair> pairs;
  SeparationStatus overall = SeparationStatus::Confirmed;

  std::size_t count(SeparationStatus s) const noexcept;
};

/// Brackets k_D(x_i, x_j) for every pair in the unpunctured base of `domain`.
SeparationReport check_separation(const Domain& domain, const PunctureSet& punctures, double kappa,
                                  const GraphParams& graph = {}, const QuadratureParams& quad = {});

/// Greedy rejection sampling: a candidate is kept iff j_D to every kept point is >= kappa.
/// Throws InfeasibleError when `count` points cannot be placed within the attempt budget.
PunctureSet generate_separated_punctures(const Domain& domain, double kappa, std::size_t count,
                                         std::uint64_t seed);

// ---------------------------------------------------------------------------------------
// Sampling

/// Uniform point of the base domain. Ball: the ball itself. Half-space: a ball of radius 1
/// touching the boundary. Whole space: a ball around the punctures.
Vector sample_point(const Domain& domain, Rng& rng);

/// Norm-unit direction, uniform on the Euclidean sphere then rescaled.
Vector sample_direction(const NormSpec& space, Rng& rng);

enum class PairSampler { Uniform, PunctureAdjacent, BoundaryAdjacent, Axial, Mixed };

PairSampler parse_pair_sampler(const std::string& name);
std::string to_string(PairSampler sampler);

/// Pair drawn in the domain G (punctures included). Axial requires a half-space base.
/// Mixed cycles uniform / puncture-adjacent / boundary-adjacent by `index`.
std::pair<Vector, Vector> sample_pair(const Domain& domain, PairSampler sampler, Rng& rng,
                                      std::size_t index = 0);

// ---------------------------------------------------------------------------------------
// Lemma reports

enum class Verdict { Confirmed, PartialConfirm, Inconclusive, Refuted, PreconditionFailed };

std::string to_string(Verdict v);
std::string to_string(SeparationStatus s);

struct TrialRecord {
  std::size_t index = 0;
  double lhs_lower = 0.0;  // certified lower bound of the left-hand side
  double lhs_upper = 0.0;  // certified upper bound of the left-hand side
  double rhs = 0.0;        // claimed bound
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

struct LemmaReport {
  std::string id;
  std::size_t trials = 0;
  std::size_t confirmed = 0;
  std::size_t partial = 0;
  std::size_t inconclusive = 0;
  std::size_t refuted = 0;
  std::size_t precondition_failed = 0;
  /// Smallest rhs - lhs_upper over decided trials (kInf when there are none).
  double worst_slack = kInf;
  std::vector<TrialRecord> records;

  void add(TrialRecord record);
};

/// Puncture-ball checks, one report per part.
struct Lemma31Report {
  LemmaReport at_most_one;
  LemmaReport exactly_one;
  LemmaReport nearest_constant;
};

/// Requires P Confirmed at kappa = 1/2 in the base domain; `domain` carries P.
Lemma31Report lemma31_suite(const Domain& domain, std::size_t trials, std::uint64_t seed);

struct Lemma32Config {
  Vector w1;
  Vector w2;
  double mu = 0.0;
};

/// Hypothesis-satisfying draw for the k_G <= 13/2 j_G comparison. Throws InfeasibleError when
/// the domain offers no puncture with room for the construction.
Lemma32Config sample_lemma32_config(const Domain& domain, Rng& rng);

/// True iff 0 < mu <= 1/32, w2 in the closed mu d_D(w1) ball and min d_G <= mu/2 d_D(w1).
bool lemma32_hypotheses(const Domain& domain, const Lemma32Config& config);

LemmaReport lemma32_check(const Domain& domain, std::size_t trials, std::uint64_t seed,
                          const GraphParams& graph = {}, const QuadratureParams& quad = {});
/// One lemma 3.2 trial on an explicit configuration.
TrialRecord lemma32_trial(const Domain& domain, const Lemma32Config& config, const GraphParams& graph,
                          const QuadratureParams& quad);

struct Lemma33Instance {
  Domain domain;  // base punctures plus the auxiliary one
  Vector w1;
  Vector w2;
};

/// Auxiliary puncture at distance d_D(w1)/128, w2 on the sphere of radius d_D(w1)/32 around w1.
/// Re-certifies separation of the enlarged set; throws InfeasibleError after repeated failures.
Lemma33Instance build_lemma33_instance(const Domain& domain, Rng& rng, const GraphParams& graph = {},
                                       const QuadratureParams& quad = {});

TrialRecord lemma33_trial(const Lemma33Instance& instance, const GraphParams& graph,
                          const QuadratureParams& quad);

LemmaReport lemma33_check(const Domain& domain, std::size_t trials, std::uint64_t seed,
                          const GraphParams& graph = {}, const QuadratureParams& quad = {});

struct Lemma34Result {
  Verdict verdict = Verdict::Inconclusive;
  QhLength length_g;  // l_{k_G}(path)
  QhLength length_d;  // l_{k_D}(path)
  double k_lower_d = 0.0;
  bool from_near_geodesic = false;
  std::string note;
};

/// Checks d_G >= d_D/128 along the path with a Lipschitz margin, then the pathwise inequality
/// l_{k_G} <= 128 l_{k_D} and the inequality l_{k_G} <= 2^8 k_lower(D).
Lemma34Result lemma34_check(const Domain& domain, const Polyline& path, const QuadratureParams& quad = {},
                            bool from_near_geodesic = false);

/// Trials on near-geodesics of the base domain between sampled pairs.
LemmaReport lemma34_suite(const Domain& domain, std::size_t trials, std::uint64_t seed,
                          const GraphParams& graph = {}, const QuadratureParams& quad = {});

/// |w1 - w2| >= d_D(w1)/c implies |w1 - w2| >= d_D(w2)/(c + 1). Throws InvalidArgument when
/// c < 2, the hypothesis fails, or the inputs violate the 1-Lipschitz bound.
bool lemma35_check(double dd_w1, double dd_w2, double dist, double c);

LemmaReport lemma35_suite(const Domain& domain, std::size_t trials, const std::vector<double>& cs,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------------------
// Profiles

struct ProfileSample {
  double t = 0.0;
  double k_low = 0.0;
  double k_up = 0.0;
  double j_val = 0.0;
};

struct PsiProfile {
  std::vector<ProfileSample> samples;
  std::vector<double> bin_edges;  // 65 edges for 64 bins
  PsiSpec envelope;               // tabulated, monotone
};

inline constexpr std::size_t kEnvelopeBins = 64;

/// Sample i uses the seed stream derive_seed(seed, i).
std::vector<ProfileSample> profile_samples(const Domain& domain, PairSampler sampler, std::size_t count,
                                           std::uint64_t seed, const GraphParams& graph = {},
                                           const QuadratureParams& quad = {});

/// Monotone upper envelope of k_up over logarithmic t bins; empty bins inherit.
PsiSpec envelope_of(const std::vector<ProfileSample>& samples, std::size_t bins,
                    std::vector<double>* edges = nullptr);

PsiProfile psi_profile(const Domain& domain, PairSampler sampler, std::size_t count, std::uint64_t seed,
                       const GraphParams& graph = {}, const QuadratureParams& quad = {});

struct UniformityProfile {
  std::vector<ProfileSample> samples;
  double max_ratio = 0.0;  // max k_up / j over samples with j > 0
  double min_ratio = kInf;
  double slope = 0.0;      // least-squares slope c'
  double intercept = 0.0;  // raised until c' j + d majorizes every k_up
  std::size_t skipped = 0;
};

UniformityProfile uniformity_profile(const Domain& domain, PairSampler sampler, std::size_t count,
                                     std::uint64_t seed, const GraphParams& graph = {},
                                     const QuadratureParams& quad = {});

UniformityProfile uniformity_of(std::vector<ProfileSample> samples);

// ---------------------------------------------------------------------------------------
// Removability transfer

inline constexpr double kForwardFactor = 4096.0;   // 2^12
inline constexpr double kBackwardFactor = 3.0;
inline constexpr double kBackwardScale = 128.0;    // 2^7

/// k_G(z1, z2) <= 2^12 psi(t_G) for pairs in G = domain (with punctures).
LemmaReport theorem11_forward_check(const Domain& domain, const PsiSpec& psi, PairSampler sampler,
                                    std::size_t pairs, std::uint64_t seed, const GraphParams& graph = {},
                                    const QuadratureParams& quad = {});

/// k_D(z1, z2) <= 3 psi1(2^7 t_D) for pairs in D = base of `domain`.
LemmaReport theorem11_backward_check(const Domain& domain, const PsiSpec& psi1, PairSampler sampler,
                                     std::size_t pairs, std::uint64_t seed, const GraphParams& graph = {},
                                     const QuadratureParams& quad = {});

struct DoubleConeResult {
  bool pass = false;
  double minimal_c = 0.0;
  double length_ratio = 0.0;  // l(path) / |z1 - z2|
  double cone_ratio = 0.0;    // max over vertices of min arm / d(z)
};

/// Both double c-cone conditions at vertex resolution, using the domain's own distance.
DoubleConeResult double_cone_check(const Domain& domain, const Polyline& path, double c);

// ---------------------------------------------------------------------------------------
// Annular nets

struct CountNonPsiInstance {
  double r = 0.0;
  int j = 0;
  PunctureSet net;  // points of the annulus r <= |z| < 21r/20
  Vector a;         // (11r/10) e1
  Vector b;         // (9r/10) e1
  bool covering_verified = false;
  double covering_sup = kInf;   // certified sup over the annulus of the distance to the net
  std::size_t probes = 0;
  double k_lower_bound = 0.0;
};

/// Polar net with covering radius < r/(20j), checked on a probe grid of spacing
/// r/(probe_density j). Throws CoveringError if a probe is uncovered.
CountNonPsiInstance countnonpsi_build(double r, int j, double probe_density = 200.0);

/// Recomputes covering_verified and covering_sup for an arbitrary net.
void countnonpsi_verify(CountNonPsiInstance& instance, double probe_density = 200.0);

/// (r/20) / covering_sup; throws CoveringError unless the covering was verified.
double countnonpsi_lower_bound(const CountNonPsiInstance& instance);

struct CountNonPsiRow {
  int j = 0;
  double r = 0.0;
  std::size_t net_size = 0;
  bool covering_verified = false;
  double covering_sup = kInf;
  double t = 0.0;  // |a - b| / min(d_G(a), d_G(b)) in the aggregate domain
  double k_lower_bound = 0.0;
};

/// Instances at r = 2^-j for j_min..j_max inside the unit disk minus the union of nets and 0.
std::vector<CountNonPsiRow> countnonpsi_aggregate(int j_min, int j_max, double probe_density = 200.0);

}  // namespace qh
