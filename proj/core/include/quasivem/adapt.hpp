#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "quasivem/estimator.hpp"
#include "quasivem/solver.hpp"

namespace quasivem {

struct DorflerResult {
  std::vector<Index> marked;
  /// Set when every indicator is zero and nothing is left to refine.
  bool converged = false;
};

/// Smallest greedy set with sum(marked) >= theta^2 * sum(all) (up to a
/// relative 1e-12). Elements are
/// taken by decreasing indicator, ties by increasing id. Throws Error for
/// negative indicators or theta outside (0, 1).
DorflerResult dorfler_mark(std::span<const double> indicators, double theta);

struct AdaptConfig {
  double theta = 0.4;
  int max_refinements = 10;
  /// Stop before solving on a mesh with more dofs than this (0 = no limit).
  std::size_t dof_budget = 0;
  int order = 1;
  /// Refine every element instead of marking.
  bool uniform = false;
  SolverOptions solver;
  EstimatorOptions estimator;
};

struct AdaptStep {
  int level = 0;
  PolyMesh mesh;
  Eigen::VectorXd u;
  Estimate estimate;
  std::size_t dofs = 0;
  /// ||grad u - Pi1 u_h||, NaN without an exact solution.
  double error = std::numeric_limits<double>::quiet_NaN();
  double estimated = 0.0;
  double effectivity = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> error_sq;
  std::vector<double> increments;
  std::vector<Index> marked;
};

struct AdaptHistory {
  std::vector<AdaptStep> steps;
  /// Message of the error that ended the loop early, empty otherwise.
  std::string failure;
};

/// Solve, estimate, mark and refine until max_refinements or the dof budget.
/// A solver failure ends the loop and keeps the steps computed so far.
/// `on_step` (optional) is called after every recorded step.
AdaptHistory adapt_loop(const NonlinearModel& model, const PolyMesh& initial,
                        const AdaptConfig& config,
                        const std::function<void(const AdaptStep&)>& on_step = {});

}  // namespace quasivem
