#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "quasivem/adapt.hpp"
#include "quasivem/problems.hpp"

namespace quasivem {

/// Settings of one run. The text form is flat `key = value` lines with `#`
/// comments; keys are the field names below.
struct ExperimentConfig {
  int problem = 1;
  GridKind grid = GridKind::quads;
  int order = 1;
  double theta = 0.4;
  int refinements = 10;
  std::size_t dof_budget = 0;
  bool uniform = false;
  std::uint64_t seed = 42;
  int lloyd_iters = 100;
  double tol = 1e-10;
  int max_iter = 100;
  std::filesystem::path output = "output";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Throws ConfigError on unknown keys or malformed values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Header `level,dofs,H1 error,Estimated error,Effectivity` and one row per step.
void write_csv(std::ostream& out, const AdaptHistory& history);

struct RunResult {
  AdaptHistory history;
  std::filesystem::path csv;
};

/// Runs the adaptive loop and writes results.csv, config.txt and
/// mesh_level_<k>.svg for the first, middle and last level into
/// `config.output`. `log` (may be null) receives one progress line per step.
RunResult run_problem(const ExperimentConfig& config, std::ostream* log = nullptr);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-tests of the library invariants (patch test, manufactured data,
/// marking, mesh bookkeeping).
std::vector<CheckResult> run_self_checks();

}  // namespace quasivem
