#include "quasivem/space.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "quasivem/error.hpp"

namespace quasivem {

// DofMap ---------------------------------------------------------------------

DofMap::DofMap(const PolyMesh& mesh, int order)
    : order_(order), num_vertices_(mesh.num_vertices()), num_edges_(mesh.num_edges()) {
  if (order < 1) throw Error("VEM order must be at least 1");
  const std::size_t ne = mesh.num_elements();
  num_dofs_ = num_vertices_ + num_edges_ * edge_moments() + ne * interior_moments();
  boundary_.assign(num_dofs_, 0);
  for (std::size_t v = 0; v < num_vertices_; ++v) {
    if (mesh.is_boundary_vertex(static_cast<Index>(v))) boundary_[v] = 1;
  }
  for (std::size_t ed = 0; ed < num_edges_; ++ed) {
    if (!mesh.is_boundary_edge(static_cast<Index>(ed))) continue;
    for (int j = 0; j < edge_moments(); ++j) boundary_[edge_dof(static_cast<Index>(ed), j)] = 1;
  }
  element_dofs_.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto id = static_cast<Index>(e);
    auto& dofs = element_dofs_[e];
    const auto cycle = mesh.element(id);
    for (Index v : cycle) dofs.push_back(vertex_dof(v));
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      for (int j = 0; j < edge_moments(); ++j) dofs.push_back(edge_dof(mesh.element_edge(id, i), j));
    }
    for (int j = 0; j < interior_moments(); ++j) dofs.push_back(interior_dof(id, j));
  }
}

std::size_t DofMap::num_boundary() const {
  std::size_t n = 0;
  for (auto b : boundary_) n += b;
  return n;
}

// Element operators ----------------------------------------------------------

namespace {

// xi_g = 2s - 1 in the global edge orientation, as a function of the local t.
double global_xi(bool forward, double t) { return forward ? 2.0 * t - 1.0 : 1.0 - 2.0 * t; }

int default_quadrature(int order) { return 2 * order + 2; }

}  // namespace

Eigen::VectorXd local_dofs(const PolyMesh& mesh, Index e, int order, const ScalarField& w,
                           int quadrature_order) {
  if (quadrature_order < 0) quadrature_order = default_quadrature(order);
  const auto cycle = mesh.element(e);
  const auto n = static_cast<int>(cycle.size());
  const int ne = order - 1;
  const int ni = poly_dim(order - 2);
  Eigen::VectorXd dofs(n + n * ne + ni);
  for (int i = 0; i < n; ++i) dofs[i] = w(mesh.vertex(cycle[i]));
  if (ne > 0) {
    const EdgeRule er = edge_rule(quadrature_order);
    for (int i = 0; i < n; ++i) {
      const Index a = cycle[i];
      const Index b = cycle[(i + 1) % n];
      const Point& pa = mesh.vertex(a);
      const Point& pb = mesh.vertex(b);
      for (int j = 0; j < ne; ++j) {
        double sum = 0.0;
        for (std::size_t q = 0; q < er.size(); ++q) {
          const double t = er.points[q];
          sum += er.weights[q] * w(pa + t * (pb - pa)) * std::pow(global_xi(a < b, t), j);
        }
        dofs[n + i * ne + j] = sum;
      }
    }
  }
  if (ni > 0) {
    const QuadratureRule rule = element_rule(mesh, e, quadrature_order);
    const MonomialBasis basis(mesh.barycenter(e), mesh.diameter(e), order - 2);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd phi(ni);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.evaluate(rule.points[q], phi);
      moments += rule.weights[q] * w(rule.points[q]) * phi;
    }
    dofs.tail(ni) = moments / mesh.area(e);
  }
  return dofs;
}

ElementOperators build_element_operators(const PolyMesh& mesh, Index e, int order,
                                         int quadrature_order) {
  if (quadrature_order < 0) quadrature_order = default_quadrature(order);
  ElementOperators ops;
  ops.element = e;
  ops.order = order;
  const auto cycle = mesh.element(e);
  const auto n = static_cast<int>(cycle.size());
  const int per_edge = order - 1;
  const int n_int = poly_dim(order - 2);
  const int n_poly = poly_dim(order);
  const int n_grad = poly_dim(order - 1);
  const int N = n + n * per_edge + n_int;
  ops.num_vertices = n;
  ops.num_dofs = N;
  ops.area = mesh.area(e);
  ops.diameter = mesh.diameter(e);
  ops.basis = MonomialBasis(mesh.barycenter(e), ops.diameter, order);
  ops.rule = element_rule(mesh, e, quadrature_order);

  const auto nq = static_cast<Eigen::Index>(ops.rule.size());
  ops.basis_at_points.resize(nq, n_poly);
  {
    Eigen::VectorXd phi(n_poly);
    for (Eigen::Index q = 0; q < nq; ++q) {
      ops.basis.evaluate(ops.rule.points[q], phi);
      ops.basis_at_points.row(q) = phi.transpose();
    }
  }
  ops.mass = mass_matrix(ops.basis, ops.rule);
  ops.mass_factor.compute(ops.mass);
  ops.lower_mass_factor.compute(ops.mass.topLeftCorner(n_grad, n_grad));

  // Dofs of the monomials.
  const EdgeRule er = edge_rule(2 * order + 1);
  Eigen::MatrixXd& D = ops.monomial_dofs;
  D.setZero(N, n_poly);
  for (int i = 0; i < n; ++i) D.row(i) = ops.basis.evaluate(mesh.vertex(cycle[i])).transpose();
  for (int i = 0; i < n && per_edge > 0; ++i) {
    const Index a = cycle[i];
    const Index b = cycle[(i + 1) % n];
    const Point& pa = mesh.vertex(a);
    const Point& pb = mesh.vertex(b);
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double t = er.points[q];
      const Eigen::VectorXd phi = ops.basis.evaluate(pa + t * (pb - pa));
      for (int j = 0; j < per_edge; ++j) {
        D.row(n + i * per_edge + j) +=
            er.weights[q] * std::pow(global_xi(a < b, t), j) * phi.transpose();
      }
    }
  }
  if (n_int > 0) D.bottomRows(n_int) = ops.mass.topRows(n_int) / ops.area;

  // Value projection: constrained least squares
  //   min sum_dofs (lambda(p) - lambda(v))^2  s.t.  interior moments of p = those of v.
  {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n_poly + n_int, n_poly + n_int);
    kkt.topLeftCorner(n_poly, n_poly) = D.transpose() * D;
    if (n_int > 0) {
      const Eigen::MatrixXd C = ops.mass.topRows(n_int) / ops.area;
      kkt.bottomLeftCorner(n_int, n_poly) = C;
      kkt.topRightCorner(n_poly, n_int) = C.transpose();
    }
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_poly + n_int, N);
    rhs.topRows(n_poly) = D.transpose();
    for (int j = 0; j < n_int; ++j) rhs(n_poly + j, N - n_int + j) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    lu.setThreshold(1e-12);
    if (lu.rank() < kkt.rows()) {
      throw LinearAlgebraError("value projection system of element " + std::to_string(e) +
                               " is rank deficient (degenerate geometry?)");
    }
    ops.value_projection = lu.solve(rhs).topRows(n_poly);
  }

  // Edge traces: degree-l polynomial in (2t-1) matching endpoint values and
  // the l-1 edge moments.
  ops.edge_traces.resize(n);
  for (int i = 0; i < n; ++i) {
    const Index a = cycle[i];
    const Index b = cycle[(i + 1) % n];
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(order + 1, order + 1);
    Eigen::MatrixXd select = Eigen::MatrixXd::Zero(order + 1, N);
    for (int k = 0; k <= order; ++k) {
      A(0, k) = (k % 2 == 0) ? 1.0 : -1.0;
      A(1, k) = 1.0;
    }
    select(0, i) = 1.0;
    select(1, (i + 1) % n) = 1.0;
    for (int j = 0; j < per_edge; ++j) {
      for (std::size_t q = 0; q < er.size(); ++q) {
        const double t = er.points[q];
        const double xg = std::pow(global_xi(a < b, t), j);
        for (int k = 0; k <= order; ++k) A(2 + j, k) += er.weights[q] * std::pow(2 * t - 1, k) * xg;
      }
      select(2 + j, n + i * per_edge + j) = 1.0;
    }
    ops.edge_traces[i] = A.partialPivLu().solve(select);
  }

  // Gradient projection:
  //   (Pi1 v, p) = -(Pi0 v, div p) + sum_e (trace v, p.n)_e  for p in [P_{l-1}]^2.
  Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(n_grad, N);
  Eigen::MatrixXd by = Eigen::MatrixXd::Zero(n_grad, N);
  {
    const double h = ops.diameter;
    Eigen::MatrixXd qx = Eigen::MatrixXd::Zero(n_grad, n_poly);
    Eigen::MatrixXd qy = Eigen::MatrixXd::Zero(n_grad, n_poly);
    for (int beta = 1; beta < n_grad; ++beta) {
      const auto [a, b] = MonomialBasis::exponent(beta);
      if (a > 0) qx.row(beta) = (a / h) * ops.mass.row(MonomialBasis::index(a - 1, b));
      if (b > 0) qy.row(beta) = (b / h) * ops.mass.row(MonomialBasis::index(a, b - 1));
    }
    bx -= qx * ops.value_projection;
    by -= qy * ops.value_projection;
  }
  const MonomialBasis grad_basis = ops.gradient_basis();
  ops.grad_const.setZero(2, N);
  for (int i = 0; i < n; ++i) {
    const Point& pa = mesh.vertex(cycle[i]);
    const Point& pb = mesh.vertex(cycle[(i + 1) % n]);
    const Point d = pb - pa;
    const double len = d.norm();
    const Point normal(d.y() / len, -d.x() / len);
    Eigen::MatrixXd edge_moment = Eigen::MatrixXd::Zero(n_grad, order + 1);
    Eigen::RowVectorXd trace_mean = Eigen::RowVectorXd::Zero(order + 1);
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double t = er.points[q];
      const Eigen::VectorXd phi = grad_basis.evaluate(pa + t * d);
      for (int k = 0; k <= order; ++k) {
        const double tk = std::pow(2 * t - 1, k);
        edge_moment.col(k) += er.weights[q] * len * tk * phi;
        trace_mean[k] += er.weights[q] * len * tk;
      }
    }
    const Eigen::MatrixXd flux = edge_moment * ops.edge_traces[i];
    bx += normal.x() * flux;
    by += normal.y() * flux;
    const Eigen::RowVectorXd mean = trace_mean * ops.edge_traces[i];
    ops.grad_const.row(0) += normal.x() * mean;
    ops.grad_const.row(1) += normal.y() * mean;
  }
  ops.grad_const /= ops.area;
  ops.grad_x = ops.lower_mass_factor.solve(bx);
  ops.grad_y = ops.lower_mass_factor.solve(by);

  // Moments against all of P_l: the low ones are dofs, the rest follow from
  // the enhancement constraint (v - Pi0 v, p) = 0.
  ops.full_moments = ops.mass * ops.value_projection;
  if (n_int > 0) {
    ops.full_moments.topRows(n_int).setZero();
    for (int j = 0; j < n_int; ++j) ops.full_moments(j, N - n_int + j) = ops.area;
  }

  const Eigen::MatrixXd non_poly = Eigen::MatrixXd::Identity(N, N) - D * ops.value_projection;
  ops.stab_base = non_poly.transpose() * non_poly;
  return ops;
}

double trace_value(const ElementOperators& ops, std::size_t i, const Eigen::VectorXd& local,
                   double t) {
  const Eigen::VectorXd coeffs = ops.edge_traces[i] * local;
  double value = 0.0;
  double power = 1.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    value += coeffs[k] * power;
    power *= 2 * t - 1;
  }
  return value;
}

// Space -----------------------------------------------------------------------

VemSpace::VemSpace(const PolyMesh& mesh, int order) : mesh_(mesh), dofs_(mesh_, order) {
  operators_.reserve(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    operators_.push_back(build_element_operators(mesh_, static_cast<Index>(e), order));
  }
}

Eigen::VectorXd VemSpace::local(const Eigen::VectorXd& global, Index e) const {
  const auto ids = dofs_.element_dofs(e);
  Eigen::VectorXd out(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out[static_cast<Eigen::Index>(i)] = global[ids[i]];
  return out;
}

Polynomial VemSpace::value_projection(Index e, const Eigen::VectorXd& global) const {
  const auto& ops = operators_[e];
  return {ops.basis, ops.value_projection * local(global, e)};
}

VectorPolynomial VemSpace::gradient_projection(Index e, const Eigen::VectorXd& global) const {
  const auto& ops = operators_[e];
  const Eigen::VectorXd v = local(global, e);
  const MonomialBasis b = ops.gradient_basis();
  return {{b, ops.grad_x * v}, {b, ops.grad_y * v}};
}

Point VemSpace::constant_gradient(Index e, const Eigen::VectorXd& global) const {
  return operators_[e].grad_const * local(global, e);
}

Eigen::VectorXd interpolate(const ScalarField& w, const VemSpace& space) {
  const PolyMesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const int order = space.order();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    out[dofs.vertex_dof(static_cast<Index>(v))] = w(mesh.vertex(static_cast<Index>(v)));
  }
  if (dofs.edge_moments() > 0) {
    const EdgeRule er = edge_rule(2 * order + 2);
    for (std::size_t ed = 0; ed < mesh.num_edges(); ++ed) {
      const Edge& edge = mesh.edge(static_cast<Index>(ed));
      const Point& pa = mesh.vertex(edge.v0);
      const Point& pb = mesh.vertex(edge.v1);
      for (int j = 0; j < dofs.edge_moments(); ++j) {
        double sum = 0.0;
        for (std::size_t q = 0; q < er.size(); ++q) {
          const double s = er.points[q];
          sum += er.weights[q] * w(pa + s * (pb - pa)) * std::pow(2 * s - 1, j);
        }
        out[dofs.edge_dof(static_cast<Index>(ed), j)] = sum;
      }
    }
  }
  if (dofs.interior_moments() > 0) {
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const auto id = static_cast<Index>(e);
      const auto& ops = space.element(id);
      const int ni = dofs.interior_moments();
      Eigen::VectorXd moments = Eigen::VectorXd::Zero(ni);
      for (std::size_t q = 0; q < ops.rule.size(); ++q) {
        moments += ops.rule.weights[q] * w(ops.rule.points[q]) *
                   ops.basis_at_points.row(static_cast<Eigen::Index>(q)).head(ni).transpose();
      }
      for (int j = 0; j < ni; ++j) out[dofs.interior_dof(id, j)] = moments[j] / ops.area;
    }
  }
  return out;
}

double stabilization_scale(const ElementOperators& ops, const NonlinearModel& model,
                           const Point& g, StabilizationMode mode) {
  double scale = 0.0;
  if (mode == StabilizationMode::linear) {
    scale = model.mu_max * model.mu_min;
  } else {
    const double t = g.norm();
    double sum = 0.0;
    for (std::size_t q = 0; q < ops.rule.size(); ++q) {
      sum += ops.rule.weights[q] * model.mu(ops.rule.points[q], t);
    }
    scale = sum / ops.area;
  }
  if (!(scale > 0.0)) {
    throw ModelError("stabilisation scale is not positive on element " +
                     std::to_string(ops.element) + ": mu violates m_mu <= mu <= M_mu");
  }
  return scale;
}

Eigen::MatrixXd stabilization_matrix(const ElementOperators& ops, double scale) {
  return scale * ops.stab_base;
}

}  // namespace quasivem
