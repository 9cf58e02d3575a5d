#pragma once

// The qh subcommands as functions from a scenario and flags to a report.

#include <cstddef>
#include <optional>
#include <string>

#include "scenario.hpp"

namespace qh::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitGeometry = 3,
  kExitRefuted = 4,
  kExitUndecided = 5,
  kExitInfeasible = 6,
  kExitCovering = 7,
};

inline constexpr std::size_t kMaxPairs = 100000;
inline constexpr std::size_t kMaxTrials = 100000;

struct Options {
  std::optional<std::string> z1;
  std::optional<std::string> z2;
  std::optional<double> kappa;
  std::string lemma = "all";
  std::size_t trials = 200;
  std::string mode = "psi";
  std::size_t pairs = 200;
  std::optional<std::size_t> profile_pairs;
  std::string sampler;  // empty: the command's default
  int jmin = 10;
  int jmax = 12;
  double probe_density = 200.0;
  std::string direction = "forward";
  std::optional<std::string> psi;  // "a,b" for a log(1 + b t)
  bool want_svg = false;
};

struct RunResult {
  Json report;
  std::string csv;
  std::string svg;
  int exit_code = kExitOk;
};

RunResult cmd_dist(const Scenario& scenario, const Options& options);
RunResult cmd_check_separation(const Scenario& scenario, const Options& options);
RunResult cmd_verify_lemmas(const Scenario& scenario, const Options& options);
RunResult cmd_profile(const Scenario& scenario, const Options& options);
RunResult cmd_countnonpsi(const Options& options);
RunResult cmd_theorem11(const Scenario& scenario, const Options& options);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace qh::cli
