#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qh/error.hpp"
#include "svg.hpp"

namespace qh::cli {

namespace {

std::string csv_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json vec_json(const Vector& v) {
  Json a = Json::array();
  for (double x : v.coords()) a.push_back(x);
  return a;
}

Json graph_json(const GraphParams& g) {
  return {{"node_budget", g.node_budget}, {"ring_levels", g.ring_levels}, {"refine_rounds", g.refine_rounds},
          {"target_ratio", g.target_ratio}, {"ring_points", g.ring_points}, {"seed", g.seed}};
}

Json quad_json(const QuadratureParams& q) { return {{"rel_tol", q.rel_tol}, {"max_depth", q.max_depth}}; }

Json envelope(const std::string& command, const Scenario* scenario, Json config, Json payload) {
  Json out;
  out["tool"] = "qh";
  out["version"] = kVersion;
  out["command"] = command;
  if (scenario) {
    out["seed"] = scenario->seed;
    out["scenario"] = scenario->raw;
    config["graph"] = graph_json(scenario->graph);
    config["quad"] = quad_json(scenario->quad);
  }
  out["config"] = std::move(config);
  out["payload"] = std::move(payload);
  return out;
}

Json record_json(const TrialRecord& r) {
  return {{"index", r.index},        {"lhs_lower", number(r.lhs_lower)}, {"lhs_upper", number(r.lhs_upper)},
          {"rhs", number(r.rhs)},    {"verdict", to_string(r.verdict)},  {"note", r.note}};
}

Json report_json(const LemmaReport& r) {
  Json records = Json::array();
  for (const TrialRecord& t : r.records) records.push_back(record_json(t));
  return {{"id", r.id},
          {"trials", r.trials},
          {"confirmed", r.confirmed},
          {"partial", r.partial},
          {"inconclusive", r.inconclusive},
          {"refuted", r.refuted},
          {"precondition_failed", r.precondition_failed},
          {"worst_slack", number(r.worst_slack)},
          {"records", records}};
}

void csv_records(std::ostringstream& csv, const LemmaReport& r) {
  for (const TrialRecord& t : r.records) {
    csv << r.id << ',' << t.index << ',' << csv_num(t.lhs_lower) << ',' << csv_num(t.lhs_upper) << ','
        << csv_num(t.rhs) << ',' << to_string(t.verdict) << '\n';
  }
}

constexpr const char* kRecordHeader = "id,index,lhs_lower,lhs_upper,rhs,verdict\n";

PairSampler sampler_or(const Options& o, PairSampler fallback) {
  if (o.sampler.empty()) return fallback;
  try {
    return parse_pair_sampler(o.sampler);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

void check_count(std::size_t n, std::size_t cap, const char* what) {
  if (n < 1) throw UsageError(std::string(what) + " must be at least 1");
  if (n > cap) throw UsageError(std::string(what) + " exceeds the limit of " + std::to_string(cap));
}

Vector point_arg(const Scenario& s, const std::optional<std::string>& flag, const char* key) {
  if (flag) return parse_vector_flag(*flag, s.domain.space());
  if (s.raw.contains(key)) return parse_vector(s.raw[key], s.domain.space());
  throw UsageError(std::string("missing point --") + key);
}

Json separation_json(const SeparationReport& rep) {
  Json pairs = Json::array();
  for (const SeparationPair& p : rep.pairs) {
    pairs.push_back({{"i", p.i}, {"j", p.j}, {"lower", number(p.lower)}, {"upper", number(p.upper)},
                     {"status", to_string(p.status)}});
  }
  return {{"kappa", rep.kappa},
          {"overall", to_string(rep.overall)},
          {"confirmed", rep.count(SeparationStatus::Confirmed)},
          {"refuted", rep.count(SeparationStatus::Refuted)},
          {"undecided", rep.count(SeparationStatus::Undecided)},
          {"pairs", pairs}};
}

int separation_exit(SeparationStatus s) {
  if (s == SeparationStatus::Refuted) return kExitRefuted;
  if (s == SeparationStatus::Undecided) return kExitUndecided;
  return kExitOk;
}

PsiSpec psi_arg(const Scenario& s, const Options& o) {
  double a = 2.0;
  double b = 1.0;
  if (o.psi) {
    double x = 0, y = 0;
    char tail = 0;
    if (std::sscanf(o.psi->c_str(), "%lf,%lf%c", &x, &y, &tail) != 2) {
      throw UsageError("--psi expects 'a,b' for a log(1 + b t)");
    }
    a = x;
    b = y;
  } else if (s.raw.contains("psi")) {
    const Json& p = s.raw["psi"];
    a = p.value("a", 2.0);
    b = p.value("b", 1.0);
  }
  try {
    return PsiSpec::parametric(a, b);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> admissibility_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 240; ++k) grid.push_back(std::pow(10.0, -6.0 + 12.0 * k / 240.0));
  return grid;
}

Json samples_json(const std::vector<ProfileSample>& samples) {
  Json arr = Json::array();
  for (const ProfileSample& s : samples) {
    arr.push_back({{"t", number(s.t)}, {"k_low", number(s.k_low)}, {"k_up", number(s.k_up)}, {"j", number(s.j_val)}});
  }
  return arr;
}

Json psi_json(const PsiSpec& psi) {
  if (psi.is_parametric()) return {{"form", "parametric"}, {"a", psi.a()}, {"b", psi.b()}};
  Json knots = Json::array();
  Json values = Json::array();
  for (double k : psi.knots()) knots.push_back(k);
  for (double v : psi.values()) values.push_back(number(v));
  return {{"form", "tabulated"}, {"knots", knots}, {"values", values}, {"range_end", number(psi.range_end())}};
}

}  // namespace

// ---------------------------------------------------------------------------------------

RunResult cmd_dist(const Scenario& s, const Options& o) {
  const Vector z1 = point_arg(s, o.z1, "z1");
  const Vector z2 = point_arg(s, o.z2, "z2");
  for (const Vector* z : {&z1, &z2}) {
    if (!(s.domain.clearance(*z) > 0.0)) throw GeometryError("point lies outside the domain");
  }
  const DistanceBracket br = k_bracket(s.domain, z1, z2, s.graph, s.quad);
  const double j = j_metric(s.domain, z1, z2);
  Json witness = Json::array();
  if (br.witness) {
    for (const Vector& v : br.witness->vertices()) witness.push_back(vec_json(v));
  }
  Json payload = {{"z1", vec_json(z1)},
                  {"z2", vec_json(z2)},
                  {"lower", number(br.lower)},
                  {"upper", number(br.upper)},
                  {"ratio", number(br.ratio())},
                  {"j", number(j)},
                  {"bounded", br.bounded()},
                  {"witness_vertices", br.witness ? br.witness->size() : 0},
                  {"witness", witness}};
  RunResult out;
  out.report = envelope("dist", &s, Json::object(), std::move(payload));
  std::ostringstream csv;
  csv << "lower,upper,ratio,j,witness_vertices\n"
      << csv_num(br.lower) << ',' << csv_num(br.upper) << ',' << csv_num(br.ratio()) << ',' << csv_num(j) << ','
      << (br.witness ? br.witness->size() : 0) << '\n';
  out.csv = csv.str();
  if (o.want_svg) {
    std::vector<Polyline> paths;
    if (br.witness) paths.push_back(*br.witness);
    out.svg = render_svg(s.domain, paths, {z1, z2});
  }
  return out;
}

RunResult cmd_check_separation(const Scenario& s, const Options& o) {
  if (!s.domain.has_punctures()) throw UsageError("check-separation needs punctures in the scenario");
  const double kappa = o.kappa.value_or(s.domain.punctures().kappa);
  const SeparationReport rep = check_separation(s.domain, s.domain.punctures(), kappa, s.graph, s.quad);
  RunResult out;
  out.report = envelope("check-separation", &s, {{"kappa", kappa}}, separation_json(rep));
  std::ostringstream csv;
  csv << "i,j,lower,upper,status\n";
  for (const SeparationPair& p : rep.pairs) {
    csv << p.i << ',' << p.j << ',' << csv_num(p.lower) << ',' << csv_num(p.upper) << ',' << to_string(p.status)
        << '\n';
  }
  out.csv = csv.str();
  out.exit_code = separation_exit(rep.overall);
  if (o.want_svg && s.domain.dim() == 2) out.svg = render_svg(s.domain, {});
  return out;
}

RunResult cmd_verify_lemmas(const Scenario& s, const Options& o) {
  check_count(o.trials, kMaxTrials, "--trials");
  const std::vector<std::string> known = {"31", "32", "33", "34", "35"};
  std::vector<std::string> chosen;
  if (o.lemma == "all") {
    chosen = known;
  } else if (std::find(known.begin(), known.end(), o.lemma) != known.end()) {
    chosen = {o.lemma};
  } else {
    throw UsageError("--lemma must be one of 31, 32, 33, 34, 35, all");
  }
  const Domain& g = s.domain;
  const std::uint64_t seed = s.seed;

  Json payload = Json::object();
  std::vector<LemmaReport> reports;
  int exit_code = kExitOk;

  // Lemmas 3.1, 3.2 and 3.4 assume a separated puncture set.
  const bool needs_separation = std::any_of(chosen.begin(), chosen.end(), [](const std::string& l) {
    return l == "31" || l == "32" || l == "34";
  });
  bool separated = true;
  if (needs_separation && g.has_punctures()) {
    const SeparationReport rep = check_separation(g, g.punctures(), 0.5, s.graph, s.quad);
    payload["separation"] = {{"kappa", 0.5},
                             {"overall", to_string(rep.overall)},
                             {"refuted", rep.count(SeparationStatus::Refuted)},
                             {"undecided", rep.count(SeparationStatus::Undecided)}};
    separated = rep.overall == SeparationStatus::Confirmed;
    if (!separated) exit_code = separation_exit(rep.overall);
  }

  for (const std::string& l : chosen) {
    const bool gated = (l == "31" || l == "32" || l == "34") && !separated;
    if (gated) continue;
    if (l == "31") {
      const Lemma31Report r = lemma31_suite(g, o.trials, derive_seed(seed, 31));
      reports.push_back(r.at_most_one);
      reports.push_back(r.exactly_one);
      reports.push_back(r.nearest_constant);
    } else if (l == "32") {
      reports.push_back(lemma32_check(g, o.trials, derive_seed(seed, 32), s.graph, s.quad));
    } else if (l == "33") {
      reports.push_back(lemma33_check(g, o.trials, derive_seed(seed, 33), s.graph, s.quad));
    } else if (l == "34") {
      reports.push_back(lemma34_suite(g, o.trials, derive_seed(seed, 34), s.graph, s.quad));
    } else {
      reports.push_back(lemma35_suite(g, o.trials, {2.0, 3.0, 10.0}, derive_seed(seed, 35)));
    }
  }

  Json arr = Json::array();
  std::ostringstream csv;
  csv << kRecordHeader;
  std::size_t refuted = 0;
  for (const LemmaReport& r : reports) {
    arr.push_back(report_json(r));
    csv_records(csv, r);
    refuted += r.refuted;
  }
  payload["reports"] = arr;
  payload["refuted"] = refuted;
  RunResult out;
  out.report = envelope("verify-lemmas", &s, {{"lemma", o.lemma}, {"trials", o.trials}}, std::move(payload));
  out.csv = csv.str();
  if (refuted > 0) exit_code = kExitRefuted;
  out.exit_code = exit_code;
  return out;
}

RunResult cmd_profile(const Scenario& s, const Options& o) {
  check_count(o.pairs, kMaxPairs, "--pairs");
  if (o.mode != "psi" && o.mode != "uniform") throw UsageError("--mode must be psi or uniform");
  const PairSampler sampler = sampler_or(o, PairSampler::Mixed);
  const std::vector<ProfileSample> samples =
      profile_samples(s.domain, sampler, o.pairs, derive_seed(s.seed, 1), s.graph, s.quad);

  Json payload;
  payload["mode"] = o.mode;
  if (o.mode == "psi") {
    std::vector<double> edges;
    const PsiSpec env = envelope_of(samples, kEnvelopeBins, &edges);
    Json e = Json::array();
    for (double x : edges) e.push_back(x);
    payload["envelope"] = psi_json(env);
    payload["bin_edges"] = e;
  } else {
    const UniformityProfile u = uniformity_of(samples);
    payload["max_ratio"] = number(u.max_ratio);
    payload["min_ratio"] = number(u.min_ratio);
    payload["slope"] = number(u.slope);
    payload["intercept"] = number(u.intercept);
    payload["skipped"] = u.skipped;
  }
  payload["samples"] = samples_json(samples);

  RunResult out;
  out.report = envelope("profile", &s, {{"mode", o.mode}, {"pairs", o.pairs}, {"sampler", to_string(sampler)}},
                        std::move(payload));
  std::ostringstream csv;
  csv << "t,k_low,k_up,j\n";
  for (const ProfileSample& p : samples) {
    csv << csv_num(p.t) << ',' << csv_num(p.k_low) << ',' << csv_num(p.k_up) << ',' << csv_num(p.j_val) << '\n';
  }
  out.csv = csv.str();
  if (o.want_svg) {
    std::vector<std::pair<double, double>> pts;
    for (const ProfileSample& p : samples) pts.emplace_back(p.t, p.k_up);
    out.svg = render_scatter(pts, "t", "k_upper");
  }
  return out;
}

RunResult cmd_countnonpsi(const Options& o) {
  if (!(10 <= o.jmin && o.jmin <= o.jmax && o.jmax <= 14)) {
    throw UsageError("--jmin/--jmax must satisfy 10 <= jmin <= jmax <= 14");
  }
  const std::vector<CountNonPsiRow> rows = countnonpsi_aggregate(o.jmin, o.jmax, o.probe_density);
  Json arr = Json::array();
  std::ostringstream csv;
  csv << "j,r,net_size,covering_verified,covering_sup,t,k_lower_bound\n";
  bool ok = true;
  for (const CountNonPsiRow& r : rows) {
    arr.push_back({{"j", r.j},
                   {"r", r.r},
                   {"net_size", r.net_size},
                   {"covering_verified", r.covering_verified},
                   {"covering_sup", number(r.covering_sup)},
                   {"t", number(r.t)},
                   {"k_lower_bound", number(r.k_lower_bound)}});
    csv << r.j << ',' << csv_num(r.r) << ',' << r.net_size << ',' << (r.covering_verified ? "true" : "false") << ','
        << csv_num(r.covering_sup) << ',' << csv_num(r.t) << ',' << csv_num(r.k_lower_bound) << '\n';
    ok = ok && r.covering_verified && r.k_lower_bound >= r.j;
  }
  RunResult out;
  out.report = envelope("countnonpsi", nullptr,
                        {{"jmin", o.jmin}, {"jmax", o.jmax}, {"probe_density", o.probe_density}},
                        {{"rows", arr}, {"all_bounds_hold", ok}});
  out.csv = csv.str();
  out.exit_code = ok ? kExitOk : kExitRefuted;
  return out;
}

RunResult cmd_theorem11(const Scenario& s, const Options& o) {
  check_count(o.pairs, kMaxPairs, "--pairs");
  const std::size_t profile_pairs = o.profile_pairs.value_or(o.pairs);
  check_count(profile_pairs, kMaxPairs, "--profile-pairs");
  if (o.direction != "forward" && o.direction != "backward") {
    throw UsageError("--direction must be forward or backward");
  }
  const PairSampler sampler = sampler_or(o, PairSampler::Mixed);
  const Domain& g = s.domain;
  const Domain d = g.base_domain();
  Json payload;
  Json config = {{"direction", o.direction}, {"pairs", o.pairs}, {"profile_pairs", profile_pairs},
                 {"sampler", to_string(sampler)}};
  int exit_code = kExitOk;

  if (g.has_punctures()) {
    const SeparationReport rep = check_separation(g, g.punctures(), 0.5, s.graph, s.quad);
    payload["separation"] = to_string(rep.overall);
    if (rep.overall != SeparationStatus::Confirmed) {
      RunResult out;
      out.report = envelope("theorem11", &s, config, std::move(payload));
      out.csv = kRecordHeader;
      out.exit_code = separation_exit(rep.overall);
      return out;
    }
  }

  LemmaReport report;
  if (o.direction == "forward") {
    const PsiSpec psi = psi_arg(s, o);
    config["psi"] = psi_json(psi);
    if (!psi_admissible(psi, admissibility_grid())) {
      throw UsageError("psi is not admissible: psi(t) < log(1 + t) somewhere on the grid");
    }
    // The base domain must itself be psi-uniform on the sampled pairs.
    const std::vector<ProfileSample> pre = profile_samples(d, sampler, profile_pairs, derive_seed(s.seed, 2), s.graph, s.quad);
    std::size_t violations = 0;
    for (const ProfileSample& p : pre) {
      if (p.t > 0.0 && p.k_up > psi(p.t)) ++violations;
    }
    payload["precheck"] = {{"pairs", pre.size()}, {"violations", violations}};
    if (violations > 0) exit_code = kExitUndecided;
    report = theorem11_forward_check(g, psi, sampler, o.pairs, derive_seed(s.seed, 3), s.graph, s.quad);
  } else {
    const PsiProfile prof = psi_profile(g, sampler, profile_pairs, derive_seed(s.seed, 2), s.graph, s.quad);
    payload["psi1"] = psi_json(prof.envelope);
    report = theorem11_backward_check(g, prof.envelope, sampler, o.pairs, derive_seed(s.seed, 3), s.graph, s.quad);
  }
  payload["report"] = report_json(report);

  RunResult out;
  out.report = envelope("theorem11", &s, std::move(config), std::move(payload));
  std::ostringstream csv;
  csv << kRecordHeader;
  csv_records(csv, report);
  out.csv = csv.str();
  if (report.refuted > 0) exit_code = kExitRefuted;
  out.exit_code = exit_code;
  return out;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const DimensionError*>(&e)) return kExitUsage;
  if (dynamic_cast<const GeometryError*>(&e) || dynamic_cast<const QuadratureError*>(&e)) return kExitGeometry;
  if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
  if (dynamic_cast<const CoveringError*>(&e)) return kExitCovering;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitUsage;
  return kExitUsage;
}

}  // namespace qh::cli
