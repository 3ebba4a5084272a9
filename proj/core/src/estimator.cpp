#include "quasivem/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "quasivem/error.hpp"

namespace quasivem {

namespace {

Eigen::Matrix2d jacobian(const VectorPolynomial& g, const Point& x) {
  Eigen::Matrix2d j;
  j << g.x.dx()(x), g.x.dy()(x), g.y.dx()(x), g.y.dy()(x);
  return j;
}

// Derivatives of a vector polynomial, cached so pointwise evaluation is cheap.
struct Derivatives {
  Polynomial xx, xy, yx, yy;
  explicit Derivatives(const VectorPolynomial& g)
      : xx(g.x.dx()), xy(g.x.dy()), yx(g.y.dx()), yy(g.y.dy()) {}
  [[nodiscard]] Eigen::Matrix2d at(const Point& p) const {
    Eigen::Matrix2d j;
    j << xx(p), xy(p), yx(p), yy(p);
    return j;
  }
};

double normal_flux_difference(const NonlinearModel& model, const ElementFields& fields,
                              const Point& x, const Point& normal, bool exact_part) {
  const Point g = fields.grad(x);
  const double mh = fields.mu_h(x);
  const double m = exact_part ? model.mu(x, g.norm()) - mh : mh;
  return m * g.dot(normal);
}

}  // namespace

int estimator_quadrature_order(int order) { return std::max(2 * order + 2, 4 * order - 2); }

Polynomial mu_h_poly(const ElementOperators& ops, const NonlinearModel& model,
                     const VectorPolynomial& grad, const QuadratureRule& rule) {
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(ops.basis.size());
  Eigen::VectorXd phi(ops.basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& x = rule.points[q];
    ops.basis.evaluate(x, phi);
    moments += rule.weights[q] * model.mu(x, grad(x).norm()) * phi;
  }
  return {ops.basis, ops.mass_factor.solve(moments)};
}

double flux_divergence(const NonlinearModel& model, const Point& x, const Point& g,
                       const Eigen::Matrix2d& jac) {
  const double t = g.norm();
  double div = model.mu(x, t) * jac.trace();
  if (t >= 1e-14) {
    const Point grad_t = jac.transpose() * g / t;
    div += model.dmu_dt(x, t) * grad_t.dot(g);
  }
  if (model.dmu_dx) div += model.dmu_dx(x, t).dot(g);
  return div;
}

double theta_value(const NonlinearModel& model, const ElementFields& fields, const Point& x) {
  const Point g = fields.grad(x);
  const double exact_div = flux_divergence(model, x, g, jacobian(fields.grad, x));
  const double poly_div = poly_divergence(fields.mu_h * fields.grad)(x);
  return model.f(x) - fields.f_h(x) + exact_div - poly_div;
}

double stab_indicator(const ElementOperators& ops, const NonlinearModel& model,
                      const Eigen::VectorXd& u_local, StabilizationMode mode) {
  const Point g0 = ops.grad_const * u_local;
  const double scale = stabilization_scale(ops, model, g0, mode);
  const Eigen::VectorXd d = u_local - ops.monomial_dofs * (ops.value_projection * u_local);
  return scale * d.squaredNorm();
}

double psi_indicator(const ElementOperators& ops, const NonlinearModel& model,
                     const VectorPolynomial& grad, const QuadratureRule& rule) {
  const int n = poly_dim(ops.order - 1);
  const MonomialBasis lower = ops.gradient_basis();
  const auto nq = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd phi(nq, n);
  Eigen::MatrixXd field(nq, 2);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point& x = rule.points[q];
    const Point g = grad(x);
    phi.row(q) = lower.evaluate(x).transpose();
    field.row(q) = model.mu(x, g.norm()) * g.transpose();
  }
  const Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  const Eigen::MatrixXd coeffs =
      ops.lower_mass_factor.solve(phi.transpose() * w.asDiagonal() * field);
  const Eigen::MatrixXd diff = phi * coeffs - field;
  return w.dot(diff.rowwise().squaredNorm());
}

ElementFields element_fields(const ElementOperators& ops, const NonlinearModel& model,
                             const Eigen::VectorXd& u_local, const QuadratureRule& rule,
                             StabilizationMode mode) {
  ElementFields out;
  const MonomialBasis lower = ops.gradient_basis();
  out.grad = {{lower, ops.grad_x * u_local}, {lower, ops.grad_y * u_local}};
  out.mu_h = mu_h_poly(ops, model, out.grad, rule);
  {
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(ops.basis.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      moments += rule.weights[q] * model.f(rule.points[q]) * ops.basis.evaluate(rule.points[q]);
    }
    out.f_h = {ops.basis, ops.mass_factor.solve(moments)};
  }
  if (!model.dmu_dt) throw ModelError("theta requires coefficient derivative");
  const Polynomial poly_div = poly_divergence(out.mu_h * out.grad);
  const Polynomial residual = out.f_h + poly_div;
  const Derivatives derivs(out.grad);
  const double h2 = ops.diameter * ops.diameter;
  double r2 = 0.0;
  double theta2 = 0.0;
  double osc2 = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& x = rule.points[q];
    const double w = rule.weights[q];
    const double r = residual(x);
    r2 += w * r * r;
    const double osc = model.f(x) - out.f_h(x);
    osc2 += w * osc * osc;
    const double th = osc + flux_divergence(model, x, out.grad(x), derivs.at(x)) - poly_div(x);
    theta2 += w * th * th;
  }
  out.residual_sq = h2 * r2;
  out.theta_element_sq = h2 * (theta2 + osc2);
  out.stab_sq = stab_indicator(ops, model, u_local, mode);
  out.psi_sq = psi_indicator(ops, model, out.grad, rule);
  return out;
}

std::pair<double, double> edge_terms(const PolyMesh& mesh, Index ed,
                                     const std::vector<ElementFields>& fields,
                                     const NonlinearModel& model, int quadrature_order) {
  const Edge& edge = mesh.edge(ed);
  if (edge.on_boundary()) return {0.0, 0.0};
  const Point& a = mesh.vertex(edge.v0);
  const Point& b = mesh.vertex(edge.v1);
  const Point d = b - a;
  const double len = d.norm();
  // Outward normal of the left element, whose cycle runs from v0 to v1 or back.
  Point normal(d.y() / len, -d.x() / len);
  {
    const auto cycle = mesh.element(edge.left);
    const auto n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (cycle[i] == edge.v1 && cycle[(i + 1) % n] == edge.v0) {
        normal = -normal;
        break;
      }
    }
  }
  const ElementFields& plus = fields[edge.left];
  const ElementFields& minus = fields[edge.right];
  const EdgeRule er = edge_rule(quadrature_order);
  double jump2 = 0.0;
  double theta2 = 0.0;
  for (std::size_t q = 0; q < er.size(); ++q) {
    const Point x = a + er.points[q] * d;
    const double j = normal_flux_difference(model, plus, x, normal, false) -
                     normal_flux_difference(model, minus, x, normal, false);
    const double th = normal_flux_difference(model, plus, x, normal, true) -
                      normal_flux_difference(model, minus, x, normal, true);
    jump2 += er.weights[q] * len * j * j;
    theta2 += er.weights[q] * len * th * th;
  }
  return {len * jump2, len * theta2};
}

Estimate estimate(const VemSpace& space, const NonlinearModel& model, const Eigen::VectorXd& u,
                  const EstimatorOptions& options) {
  const PolyMesh& mesh = space.mesh();
  const int order = options.quadrature_order > 0 ? options.quadrature_order
                                                 : estimator_quadrature_order(space.order());
  const std::size_t ne = mesh.num_elements();
  std::vector<ElementFields> fields;
  fields.reserve(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto id = static_cast<Index>(e);
    fields.push_back(element_fields(space.element(id), model, space.local(u, id),
                                    element_rule(mesh, id, order), options.stabilization));
  }
  Estimate est;
  est.elements.resize(ne);
  est.jump_sq.assign(mesh.num_edges(), 0.0);
  est.edge_theta_sq.assign(mesh.num_edges(), 0.0);
  double sum = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    auto& ind = est.elements[e];
    ind.eta_sq = fields[e].residual_sq;
    ind.theta_sq = fields[e].theta_element_sq;
    ind.stab_sq = fields[e].stab_sq;
    ind.psi_sq = fields[e].psi_sq;
    sum += ind.total();
  }
  est.marking.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) est.marking[e] = est.elements[e].total();
  for (std::size_t ed = 0; ed < mesh.num_edges(); ++ed) {
    const auto id = static_cast<Index>(ed);
    const Edge& edge = mesh.edge(id);
    if (edge.on_boundary()) continue;
    const auto [jump, theta] = edge_terms(mesh, id, fields, model, order);
    est.jump_sq[ed] = jump;
    est.edge_theta_sq[ed] = theta;
    sum += jump + theta;
    for (Index side : {edge.left, edge.right}) {
      est.elements[side].eta_sq += 0.5 * jump;
      est.elements[side].theta_sq += 0.5 * theta;
      const double share = options.marking == EdgeAttribution::full ? 1.0 : 0.5;
      est.marking[side] += share * (jump + theta);
    }
  }
  est.total = std::sqrt(sum);
  return est;
}

std::vector<double> gradient_errors(const VemSpace& space, const NonlinearModel& model,
                                    const Eigen::VectorXd& u, int quadrature_order) {
  if (!model.has_exact_gradient()) {
    throw ModelError("the H1 error needs the exact gradient of the model");
  }
  const PolyMesh& mesh = space.mesh();
  const int order = quadrature_order > 0 ? quadrature_order : 2 * space.order() + 4;
  std::vector<double> out(mesh.num_elements(), 0.0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto id = static_cast<Index>(e);
    const VectorPolynomial g = space.gradient_projection(id, u);
    const QuadratureRule rule = element_rule(mesh, id, order);
    out[e] = rule.integrate([&](const Point& x) {
      return (model.exact_gradient(x) - g(x)).squaredNorm();
    });
  }
  return out;
}

double effectivity(double total, const VemSpace& space, const NonlinearModel& model,
                   const Eigen::VectorXd& u) {
  double err = 0.0;
  for (double v : gradient_errors(space, model, u)) err += v;
  return total / std::sqrt(err);
}

double efficiency_ratio(const PolyMesh& mesh, const Estimate& est,
                        const std::vector<double>& errors_sq) {
  double worst = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    double denom = 0.0;
    for (Index k : mesh.vertex_patch(static_cast<Index>(e))) {
      denom += errors_sq[k] + est.elements[k].stab_sq + est.elements[k].theta_sq;
    }
    if (denom > 0.0) worst = std::max(worst, est.elements[e].eta_sq / denom);
  }
  return worst;
}

}  // namespace quasivem
