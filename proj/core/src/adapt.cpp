#include "quasivem/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quasivem/error.hpp"

namespace quasivem {

DorflerResult dorfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error("Dorfler parameter must lie in (0, 1)");
  double sum = 0.0;
  for (double v : indicators) {
    if (!(v >= 0.0)) throw Error("Dorfler marking needs nonnegative indicators");
    sum += v;
  }
  DorflerResult result;
  if (sum == 0.0) {
    result.converged = true;
    return result;
  }
  std::vector<Index> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return indicators[a] > indicators[b]; });
  // Relative slack so that theta^2 rounding (0.4^2 > 0.16) cannot add an element.
  const double target = theta * theta * sum * (1.0 - 1e-12);
  double marked = 0.0;
  for (Index e : order) {
    result.marked.push_back(e);
    marked += indicators[e];
    if (marked >= target) break;
  }
  return result;
}

AdaptHistory adapt_loop(const NonlinearModel& model, const PolyMesh& initial,
                        const AdaptConfig& config,
                        const std::function<void(const AdaptStep&)>& on_step) {
  if (!(config.theta > 0.0 && config.theta < 1.0)) {
    throw ConfigError("theta must lie in (0, 1)");
  }
  AdaptHistory history;
  PolyMesh mesh = initial;
  for (int level = 0; level <= config.max_refinements; ++level) {
    AdaptStep step;
    step.level = level;
    try {
      const VemSpace space(mesh, config.order);
      step.dofs = space.dofs().size();
      if (config.dof_budget > 0 && step.dofs > config.dof_budget && level > 0) break;
      NonlinearResult solved = solve_nonlinear(space, model, config.solver);
      step.u = std::move(solved.u);
      step.increments = std::move(solved.increments);
      step.estimate = estimate(space, model, step.u, config.estimator);
      step.estimated = step.estimate.total;
      if (model.has_exact_gradient()) {
        step.error_sq = gradient_errors(space, model, step.u);
        step.error = std::sqrt(std::accumulate(step.error_sq.begin(), step.error_sq.end(), 0.0));
        step.effectivity = step.estimated / step.error;
      }
    } catch (const Error& err) {
      history.failure = err.what();
      break;
    }
    const bool last = level == config.max_refinements;
    DorflerResult marking;
    if (!last) {
      if (config.uniform) {
        marking.marked.resize(mesh.num_elements());
        std::iota(marking.marked.begin(), marking.marked.end(), 0);
      } else {
        marking = dorfler_mark(step.estimate.marking, config.theta);
      }
    }
    step.marked = marking.marked;
    step.mesh = mesh;
    history.steps.push_back(std::move(step));
    if (on_step) on_step(history.steps.back());
    if (last || marking.converged) break;
    mesh = refine(mesh, history.steps.back().marked);
  }
  return history;
}

}  // namespace quasivem
