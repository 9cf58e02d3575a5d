#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qh/error.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qh::cli::UsageError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qh::cli;
  CLI::App app{"Certified quasihyperbolic distance brackets and verification suites"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opt;
  std::string scenario_path;
  std::string json_path = "-";
  std::string csv_path;
  std::string svg_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> node_budget;
  std::optional<int> ring_levels;
  std::optional<int> refine_rounds;
  std::optional<double> target_ratio;
  std::optional<double> rel_tol;
  std::optional<int> max_depth;
  bool timing = false;

  auto common = [&](CLI::App* sub, bool scenario_required) {
    auto* s = sub->add_option("--scenario", scenario_path, "Scenario JSON file");
    if (scenario_required) s->required();
    sub->add_option("--json", json_path, "Report destination ('-' for stdout)");
    sub->add_option("--csv", csv_path, "Per-row CSV destination");
    sub->add_option("--seed", seed, "Master seed (overrides the scenario)");
    sub->add_option("--node-budget", node_budget, "Sampling graph node budget");
    sub->add_option("--ring-levels", ring_levels, "Puncture ring levels");
    sub->add_option("--refine-rounds", refine_rounds, "Graph refinement rounds");
    sub->add_option("--target-ratio", target_ratio, "Stop refining once upper <= ratio * lower");
    sub->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance");
    sub->add_option("--max-depth", max_depth, "Quadrature bisection depth");
    sub->add_flag("--timing", timing, "Include wall time in the report");
  };

  auto* dist = app.add_subcommand("dist", "Bracket k(z1, z2)");
  common(dist, true);
  dist->add_option("--z1", opt.z1, "First point, comma separated");
  dist->add_option("--z2", opt.z2, "Second point, comma separated");
  dist->add_option("--svg", svg_path, "Planar rendering of the witness path");

  auto* sep = app.add_subcommand("check-separation", "Check k_D(x_i, x_j) >= kappa for all punctures");
  common(sep, true);
  sep->add_option("--kappa", opt.kappa, "Separation level (default: the scenario's)");
  sep->add_option("--svg", svg_path, "Planar rendering of the punctures");

  auto* lem = app.add_subcommand("verify-lemmas", "Randomized checks of the comparison lemmas");
  common(lem, true);
  lem->add_option("--lemma", opt.lemma, "31, 32, 33, 34, 35 or all");
  lem->add_option("--trials", opt.trials, "Trials per lemma");

  auto* prof = app.add_subcommand("profile", "psi-uniformity or uniformity profile");
  common(prof, true);
  prof->add_option("--mode", opt.mode, "psi or uniform");
  prof->add_option("--pairs", opt.pairs, "Number of sampled pairs");
  prof->add_option("--sampler", opt.sampler, "uniform, puncture, boundary, axial or mixed");
  prof->add_option("--svg", svg_path, "Scatter of k_upper against t");

  auto* cnp = app.add_subcommand("countnonpsi", "Annular nets destroying psi-uniformity");
  common(cnp, false);
  cnp->add_option("--jmin", opt.jmin, "Smallest net index (>= 10)");
  cnp->add_option("--jmax", opt.jmax, "Largest net index (<= 14)");
  cnp->add_option("--probe-density", opt.probe_density, "Probe spacing r / (density j)");

  auto* thm = app.add_subcommand("theorem11", "Removability transfer checks");
  common(thm, true);
  thm->add_option("--direction", opt.direction, "forward or backward");
  thm->add_option("--pairs", opt.pairs, "Number of checked pairs");
  thm->add_option("--profile-pairs", opt.profile_pairs, "Pairs for the gauge profile (default: --pairs)");
  thm->add_option("--sampler", opt.sampler, "uniform, puncture, boundary, axial or mixed");
  thm->add_option("--psi", opt.psi, "Gauge a,b for a log(1 + b t)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<Scenario> scenario;
    if (!scenario_path.empty()) {
      Json raw;
      {
        std::ifstream in(scenario_path);
        if (!in) throw UsageError("cannot open scenario file '" + scenario_path + "'");
        try {
          raw = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw UsageError("scenario is not valid JSON: " + std::string(e.what()));
        }
      }
      if (seed) raw["seed"] = *seed;
      scenario = parse_scenario(raw);
      if (node_budget) scenario->graph.node_budget = *node_budget;
      if (ring_levels) scenario->graph.ring_levels = *ring_levels;
      if (refine_rounds) scenario->graph.refine_rounds = *refine_rounds;
      if (target_ratio) scenario->graph.target_ratio = *target_ratio;
      if (rel_tol) scenario->quad.rel_tol = *rel_tol;
      if (max_depth) scenario->quad.max_depth = *max_depth;
      scenario->graph.validate();
      scenario->quad.validate();
    }
    opt.want_svg = !svg_path.empty();

    RunResult result;
    if (*dist) result = cmd_dist(*scenario, opt);
    if (*sep) result = cmd_check_separation(*scenario, opt);
    if (*lem) result = cmd_verify_lemmas(*scenario, opt);
    if (*prof) result = cmd_profile(*scenario, opt);
    if (*cnp) result = cmd_countnonpsi(opt);
    if (*thm) result = cmd_theorem11(*scenario, opt);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (timing) result.report["wall_time_s"] = wall;
    write_file(json_path, result.report.dump(2) + "\n");
    if (!csv_path.empty()) write_file(csv_path, result.csv);
    if (!svg_path.empty() && !result.svg.empty()) write_file(svg_path, result.svg);
    std::cerr << "qh: exit " << result.exit_code << " after " << wall << " s\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "qh: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
