#pragma once

#include <vector>

#include <Eigen/Dense>

#include "quasivem/mesh.hpp"
#include "quasivem/model.hpp"
#include "quasivem/poly.hpp"
#include "quasivem/quadrature.hpp"

namespace quasivem {

/// Global numbering of the degrees of freedom of the order-l space:
/// one value per vertex, l-1 scaled moments per edge and dim P_{l-2}
/// scaled moments per element.
///
/// Global ids are laid out as [vertices | edges | interiors]. Local order on
/// an element is [vertex values (cycle order) | edge moments (edge by edge) |
/// interior moments]. Edge moments use the monomials xi^j with xi = 2s - 1
/// and s running from the lower to the higher vertex id, so both
/// neighbours agree on them.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const PolyMesh& mesh, int order);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::size_t size() const { return num_dofs_; }
  [[nodiscard]] int edge_moments() const { return order_ - 1; }
  [[nodiscard]] int interior_moments() const { return poly_dim(order_ - 2); }

  [[nodiscard]] Index vertex_dof(Index v) const { return v; }
  [[nodiscard]] Index edge_dof(Index ed, int j) const {
    return static_cast<Index>(num_vertices_ + ed * edge_moments() + j);
  }
  [[nodiscard]] Index interior_dof(Index e, int j) const {
    return static_cast<Index>(num_vertices_ + num_edges_ * edge_moments() +
                              e * interior_moments() + j);
  }

  [[nodiscard]] std::span<const Index> element_dofs(Index e) const { return element_dofs_[e]; }
  [[nodiscard]] bool is_boundary(Index dof) const { return boundary_[dof] != 0; }
  [[nodiscard]] std::size_t num_boundary() const;

 private:
  int order_ = 1;
  std::size_t num_vertices_ = 0;
  std::size_t num_edges_ = 0;
  std::size_t num_dofs_ = 0;
  std::vector<std::vector<Index>> element_dofs_;
  std::vector<std::uint8_t> boundary_;
};

/// Per-element matrices acting on the local dof vector.
///
/// Polynomials are expanded in `basis` (scaled monomials centred at the
/// barycentre, scale h_E). Edge traces are expanded in (2t - 1)^k with t in
/// [0, 1] following the element's own (counter-clockwise) orientation.
struct ElementOperators {
  Index element = -1;
  int order = 1;
  int num_vertices = 0;
  int num_dofs = 0;
  double area = 0.0;
  double diameter = 0.0;

  MonomialBasis basis;
  QuadratureRule rule;
  Eigen::MatrixXd basis_at_points;   // points x dim P_l
  Eigen::MatrixXd mass;              // dim P_l x dim P_l
  Eigen::LLT<Eigen::MatrixXd> mass_factor;
  Eigen::LLT<Eigen::MatrixXd> lower_mass_factor;  // degree l-1 block

  Eigen::MatrixXd monomial_dofs;     // N x dim P_l : dofs of each monomial
  Eigen::MatrixXd value_projection;  // dim P_l x N
  std::vector<Eigen::MatrixXd> edge_traces;  // (l+1) x N per local edge
  Eigen::MatrixXd grad_x;            // dim P_{l-1} x N
  Eigen::MatrixXd grad_y;            // dim P_{l-1} x N
  Eigen::MatrixXd grad_const;        // 2 x N
  Eigen::MatrixXd full_moments;      // dim P_l x N : int_E v m_a
  Eigen::MatrixXd stab_base;         // (I - D Pi0)^T (I - D Pi0)

  [[nodiscard]] MonomialBasis gradient_basis() const { return basis.with_degree(order - 1); }
};

/// Builds every operator of element `e`. `quadrature_order` defaults to 2l+2.
/// Throws LinearAlgebraError on a rank-deficient projection system.
ElementOperators build_element_operators(const PolyMesh& mesh, Index e, int order,
                                         int quadrature_order = -1);

/// Trace of a local dof vector along local edge `i`, evaluated at t in [0,1].
double trace_value(const ElementOperators& ops, std::size_t i, const Eigen::VectorXd& local,
                   double t);

/// The order-l virtual element space on a mesh (the space keeps its own copy).
class VemSpace {
 public:
  VemSpace(const PolyMesh& mesh, int order);

  [[nodiscard]] const PolyMesh& mesh() const { return mesh_; }
  [[nodiscard]] const DofMap& dofs() const { return dofs_; }
  [[nodiscard]] int order() const { return dofs_.order(); }
  [[nodiscard]] const ElementOperators& element(Index e) const { return operators_[e]; }

  [[nodiscard]] Eigen::VectorXd local(const Eigen::VectorXd& global, Index e) const;

  [[nodiscard]] Polynomial value_projection(Index e, const Eigen::VectorXd& global) const;
  [[nodiscard]] VectorPolynomial gradient_projection(Index e, const Eigen::VectorXd& global) const;
  [[nodiscard]] Point constant_gradient(Index e, const Eigen::VectorXd& global) const;

 private:
  PolyMesh mesh_;
  DofMap dofs_;
  std::vector<ElementOperators> operators_;
};

/// Local dofs of a function on one element (vertex values, scaled edge and
/// interior moments by quadrature of order `quadrature_order`).
Eigen::VectorXd local_dofs(const PolyMesh& mesh, Index e, int order, const ScalarField& w,
                           int quadrature_order = -1);

/// Global dof vector of the interpolant w_I.
Eigen::VectorXd interpolate(const ScalarField& w, const VemSpace& space);

enum class StabilizationMode {
  element_average,  ///< mean over E of mu(x, |Pi1^0 z|)
  linear,           ///< M_mu * m_mu
};

/// Scale factor multiplying the dofi-dofi form. For element_average, `g` is
/// the constant gradient projection of the frozen iterate. Throws
/// ModelError if the scale is not positive.
double stabilization_scale(const ElementOperators& ops, const NonlinearModel& model,
                           const Point& g, StabilizationMode mode);

/// scale * (I - D Pi0)^T (I - D Pi0).
Eigen::MatrixXd stabilization_matrix(const ElementOperators& ops, double scale);

}  // namespace quasivem
