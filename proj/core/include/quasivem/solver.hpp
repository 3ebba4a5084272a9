#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "quasivem/model.hpp"
#include "quasivem/space.hpp"

namespace quasivem {

/// Global linear system of one frozen-coefficient step.
///
/// Before apply_dirichlet the matrix acts on all dofs. Afterwards it acts on
/// the free dofs only (listed in `free`), and `lifted` is a full-size vector
/// holding the boundary values.
struct DiscreteSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<Index> free;
  Eigen::VectorXd lifted;

  [[nodiscard]] bool eliminated() const { return lifted.size() > 0; }
  /// Full dof vector from a solution on the free dofs.
  [[nodiscard]] Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100;
  StabilizationMode stabilization = StabilizationMode::element_average;
};

/// Element matrix of a_h^E(z; ., .) for the local dofs `z_local`.
Eigen::MatrixXd element_matrix(const ElementOperators& ops, const NonlinearModel& model,
                               const Eigen::VectorXd& z_local, StabilizationMode mode);

/// Local load vector (P_l f, Pi0 phi_i) computed through the full moments.
Eigen::VectorXd element_load(const ElementOperators& ops, const NonlinearModel& model);

DiscreteSystem assemble_linearized(const VemSpace& space, const NonlinearModel& model,
                                   const Eigen::VectorXd& z,
                                   StabilizationMode mode = StabilizationMode::element_average);

/// Dofs of g on the boundary (vertex values and scaled edge moments), zero elsewhere.
Eigen::VectorXd boundary_values(const VemSpace& space, const ScalarField& g);

/// Symmetric elimination of the boundary dofs.
DiscreteSystem apply_dirichlet(const DiscreteSystem& system, const NonlinearModel& model,
                               const VemSpace& space);

/// Sparse LDL^T with iterative refinement. Throws LinearAlgebraError if the
/// factorisation fails, a pivot is not positive or the relative residual
/// |b - Ax|_inf / (|A|_inf |x|_inf + |b|_inf) stays above 1e-12.
Eigen::VectorXd solve_linear(const DiscreteSystem& system);

struct NonlinearResult {
  Eigen::VectorXd u;
  /// Scaled increments ||u^{k+1} - u^k||_inf / max(1, ||u^{k+1}||_inf).
  std::vector<double> increments;
  int iterations = 0;
};

/// Kacanov iteration started from the solution with mu(x, 0).
/// Throws ConvergenceError after max_iter steps.
NonlinearResult solve_nonlinear(const VemSpace& space, const NonlinearModel& model,
                                const SolverOptions& options = {});

/// Residual A(u) u - b of the discrete nonlinear problem on the free dofs.
Eigen::VectorXd nonlinear_residual(const VemSpace& space, const NonlinearModel& model,
                                   const Eigen::VectorXd& u,
                                   StabilizationMode mode = StabilizationMode::element_average);

}  // namespace quasivem
