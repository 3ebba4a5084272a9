#include "quasivem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/SparseCholesky>

#include "quasivem/error.hpp"

namespace quasivem {

Eigen::VectorXd DiscreteSystem::expand(const Eigen::VectorXd& reduced) const {
  if (!eliminated()) return reduced;
  Eigen::VectorXd full = lifted;
  for (std::size_t i = 0; i < free.size(); ++i) full[free[i]] = reduced[static_cast<Eigen::Index>(i)];
  return full;
}

Eigen::MatrixXd element_matrix(const ElementOperators& ops, const NonlinearModel& model,
                               const Eigen::VectorXd& z_local, StabilizationMode mode) {
  const int n_grad = poly_dim(ops.order - 1);
  const Eigen::VectorXd gx = ops.grad_x * z_local;
  const Eigen::VectorXd gy = ops.grad_y * z_local;
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(n_grad, n_grad);
  for (std::size_t q = 0; q < ops.rule.size(); ++q) {
    const auto phi = ops.basis_at_points.row(static_cast<Eigen::Index>(q)).head(n_grad);
    const Point g(phi.dot(gx), phi.dot(gy));
    const double m = model.mu(ops.rule.points[q], g.norm());
    weighted.noalias() += (ops.rule.weights[q] * m) * phi.transpose() * phi;
  }
  const Point g0 = ops.grad_const * z_local;
  const double scale = stabilization_scale(ops, model, g0, mode);
  Eigen::MatrixXd k = ops.grad_x.transpose() * weighted * ops.grad_x +
                      ops.grad_y.transpose() * weighted * ops.grad_y;
  k += scale * ops.stab_base;
  return k;
}

Eigen::VectorXd element_load(const ElementOperators& ops, const NonlinearModel& model) {
  Eigen::VectorXd values(static_cast<Eigen::Index>(ops.rule.size()));
  for (std::size_t q = 0; q < ops.rule.size(); ++q) {
    values[static_cast<Eigen::Index>(q)] = model.f(ops.rule.points[q]);
  }
  const Eigen::VectorXd fh = project_values(ops.mass_factor, ops.basis_at_points, ops.rule, values);
  return ops.full_moments.transpose() * fh;
}

DiscreteSystem assemble_linearized(const VemSpace& space, const NonlinearModel& model,
                                   const Eigen::VectorXd& z, StabilizationMode mode) {
  const PolyMesh& mesh = space.mesh();
  const auto n = static_cast<Eigen::Index>(space.dofs().size());
  std::vector<Eigen::Triplet<double>> triplets;
  DiscreteSystem system;
  system.rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto id = static_cast<Index>(e);
    const ElementOperators& ops = space.element(id);
    const auto dofs = space.dofs().element_dofs(id);
    const Eigen::MatrixXd k = element_matrix(ops, model, space.local(z, id), mode);
    const Eigen::VectorXd b = element_load(ops, model);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      system.rhs[dofs[i]] += b[static_cast<Eigen::Index>(i)];
      for (std::size_t j = 0; j < dofs.size(); ++j) {
        triplets.emplace_back(dofs[i], dofs[j],
                              k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
  system.matrix.resize(n, n);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return system;
}

Eigen::VectorXd boundary_values(const VemSpace& space, const ScalarField& g) {
  const PolyMesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto id = static_cast<Index>(v);
    if (mesh.is_boundary_vertex(id)) out[dofs.vertex_dof(id)] = g(mesh.vertex(id));
  }
  if (dofs.edge_moments() == 0) return out;
  const EdgeRule er = edge_rule(2 * space.order() + 2);
  for (std::size_t ed = 0; ed < mesh.num_edges(); ++ed) {
    const auto id = static_cast<Index>(ed);
    if (!mesh.is_boundary_edge(id)) continue;
    const Point& a = mesh.vertex(mesh.edge(id).v0);
    const Point& b = mesh.vertex(mesh.edge(id).v1);
    for (int j = 0; j < dofs.edge_moments(); ++j) {
      double sum = 0.0;
      for (std::size_t q = 0; q < er.size(); ++q) {
        const double s = er.points[q];
        sum += er.weights[q] * g(a + s * (b - a)) * std::pow(2 * s - 1, j);
      }
      out[dofs.edge_dof(id, j)] = sum;
    }
  }
  return out;
}

DiscreteSystem apply_dirichlet(const DiscreteSystem& system, const NonlinearModel& model,
                               const VemSpace& space) {
  const DofMap& dofs = space.dofs();
  const auto n = static_cast<Index>(dofs.size());
  DiscreteSystem out;
  out.lifted = boundary_values(space, model.g);
  std::vector<Index> reduced(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    if (dofs.is_boundary(i)) continue;
    reduced[i] = static_cast<Index>(out.free.size());
    out.free.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(out.free.size());
  out.rhs.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) out.rhs[i] = system.rhs[out.free[i]];
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (Eigen::Index col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      const Index r = reduced[it.row()];
      if (r < 0) continue;
      const Index c = reduced[it.col()];
      if (c >= 0) {
        triplets.emplace_back(r, c, it.value());
      } else {
        out.rhs[r] -= it.value() * out.lifted[it.col()];
      }
    }
  }
  out.matrix.resize(m, m);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

// b - A x accumulated in long double, so the refinement is not limited by the
// rounding of A x itself.
Eigen::VectorXd extended_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& x) {
  std::vector<long double> acc(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) acc[static_cast<std::size_t>(i)] = b[i];
  for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      acc[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * x[it.col()];
    }
  }
  Eigen::VectorXd r(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) r[i] = static_cast<double>(acc[static_cast<std::size_t>(i)]);
  return r;
}

}  // namespace

Eigen::VectorXd solve_linear(const DiscreteSystem& system) {
  const Eigen::SparseMatrix<double>& a = system.matrix;
  const Eigen::VectorXd& b = system.rhs;
  if (a.rows() == 0) return Eigen::VectorXd(0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) {
    throw LinearAlgebraError("sparse LDL^T factorisation failed on a " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " system");
  }
  const Eigen::VectorXd d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      std::ostringstream msg;
      msg << "system is not positive definite: pivot " << i << " = " << d[i];
      throw LinearAlgebraError(msg.str());
    }
  }
  if (b.norm() == 0.0) return Eigen::VectorXd::Zero(b.size());
  // Normwise backward error; plain |r|/|b| bottoms out above 1e-12 once
  // |A||x| >> |b|, whatever the solver.
  double a_norm = 0.0;
  {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) row_sums[it.row()] += std::abs(it.value());
    }
    a_norm = row_sums.maxCoeff();
  }
  auto backward_error = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
    return r.lpNorm<Eigen::Infinity>() / (a_norm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  };
  Eigen::VectorXd x = ldlt.solve(b);
  Eigen::VectorXd r = extended_residual(a, b, x);
  for (int step = 0; step < 3; ++step) {
    x += ldlt.solve(r);
    r = extended_residual(a, b, x);
  }
  if (backward_error(x, r) > 1e-12) {
    std::ostringstream msg;
    msg << "relative residual " << backward_error(x, r) << " exceeds 1e-12 after refinement";
    throw LinearAlgebraError(msg.str());
  }
  return x;
}

NonlinearResult solve_nonlinear(const VemSpace& space, const NonlinearModel& model,
                                const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw Error("nonlinear tolerance must be positive");
  const auto n = static_cast<Eigen::Index>(space.dofs().size());
  NonlinearResult result;
  auto step = [&](const Eigen::VectorXd& z) {
    const DiscreteSystem reduced =
        apply_dirichlet(assemble_linearized(space, model, z, options.stabilization), model, space);
    return reduced.expand(solve_linear(reduced));
  };
  result.u = step(Eigen::VectorXd::Zero(n));
  for (int k = 0; k < options.max_iter; ++k) {
    Eigen::VectorXd next = step(result.u);
    const double change = (next - result.u).lpNorm<Eigen::Infinity>() /
                          std::max(1.0, next.lpNorm<Eigen::Infinity>());
    result.u = std::move(next);
    result.increments.push_back(change);
    result.iterations = k + 1;
    if (change <= options.tol) return result;
  }
  throw ConvergenceError("Kacanov iteration did not reach tol " + std::to_string(options.tol) +
                             " in " + std::to_string(options.max_iter) + " iterations",
                         result.increments);
}

Eigen::VectorXd nonlinear_residual(const VemSpace& space, const NonlinearModel& model,
                                   const Eigen::VectorXd& u, StabilizationMode mode) {
  const DiscreteSystem full = assemble_linearized(space, model, u, mode);
  const Eigen::VectorXd r = full.matrix * u - full.rhs;
  std::vector<double> values;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!space.dofs().is_boundary(static_cast<Index>(i))) values.push_back(r[i]);
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace quasivem
