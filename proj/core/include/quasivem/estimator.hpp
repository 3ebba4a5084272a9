#pragma once

#include <vector>

#include "quasivem/model.hpp"
#include "quasivem/space.hpp"

namespace quasivem {

/// How edge terms are attributed to elements when ranking them for marking.
enum class EdgeAttribution {
  full,  ///< every element gets the whole sum over its edges
  half,  ///< interior edge terms are split evenly between the two neighbours
};

struct EstimatorOptions {
  /// Quadrature order for element and edge integrals; -1 means max(2l+2, 4l-2).
  int quadrature_order = -1;
  StabilizationMode stabilization = StabilizationMode::element_average;
  EdgeAttribution marking = EdgeAttribution::full;
};

/// Squared indicators of one element. Interior edge terms are included
/// half-half, so summing over all elements gives the global estimate.
struct ElementIndicators {
  double eta_sq = 0.0;
  double theta_sq = 0.0;
  double stab_sq = 0.0;
  double psi_sq = 0.0;

  [[nodiscard]] double total() const { return eta_sq + theta_sq + stab_sq + psi_sq; }
};

/// Quantities of one element that the edge terms need from both sides.
struct ElementFields {
  VectorPolynomial grad;  ///< Pi1 u_h
  Polynomial mu_h;        ///< P_l mu(x, |Pi1 u_h|)
  Polynomial f_h;         ///< P_l f
  double residual_sq = 0.0;       ///< h_E^2 ||R^E||^2
  double theta_element_sq = 0.0;  ///< h_E^2 ||theta^E||^2 + h_E^2 ||f - f_h||^2
  double stab_sq = 0.0;
  double psi_sq = 0.0;
};

struct Estimate {
  std::vector<ElementIndicators> elements;
  std::vector<double> jump_sq;        ///< h_e ||J^e||^2 per mesh edge (0 on the boundary)
  std::vector<double> edge_theta_sq;  ///< h_e ||theta^e||^2 per mesh edge
  std::vector<double> marking;        ///< per-element values used by Dorfler marking
  double total = 0.0;                 ///< square root of the sum of all terms
};

int estimator_quadrature_order(int order);

/// P_l of x -> mu(x, |g(x)|) on one element.
Polynomial mu_h_poly(const ElementOperators& ops, const NonlinearModel& model,
                     const VectorPolynomial& grad, const QuadratureRule& rule);

/// Per-element terms of the estimator for the local dofs `u_local`.
ElementFields element_fields(const ElementOperators& ops, const NonlinearModel& model,
                             const Eigen::VectorXd& u_local, const QuadratureRule& rule,
                             StabilizationMode mode);

/// Pointwise div(mu(x, |g|) g) by the chain rule, g given with its Jacobian.
double flux_divergence(const NonlinearModel& model, const Point& x, const Point& g,
                       const Eigen::Matrix2d& jacobian);

/// theta^E at x: (f - f_h) + div((mu - mu_h)(|g|) g).
double theta_value(const NonlinearModel& model, const ElementFields& fields, const Point& x);

/// h_e ||J^e||^2 and h_e ||theta^e||^2 for the interior edge `ed`.
std::pair<double, double> edge_terms(const PolyMesh& mesh, Index ed,
                                     const std::vector<ElementFields>& fields,
                                     const NonlinearModel& model, int quadrature_order);

/// mu(x, t) S^E(u_h; (I - P) u_h, (I - P) u_h) with the scale of the solver.
double stab_indicator(const ElementOperators& ops, const NonlinearModel& model,
                      const Eigen::VectorXd& u_local, StabilizationMode mode);

/// ||(P_{l-1} - I) mu(|g|) g||^2 on one element.
double psi_indicator(const ElementOperators& ops, const NonlinearModel& model,
                     const VectorPolynomial& grad, const QuadratureRule& rule);

Estimate estimate(const VemSpace& space, const NonlinearModel& model, const Eigen::VectorXd& u,
                  const EstimatorOptions& options = {});

/// Per-element ||grad u - Pi1 u_h||^2 with a rule of order 2l+4 (or `quadrature_order`).
/// Throws ModelError when the model has no exact gradient.
std::vector<double> gradient_errors(const VemSpace& space, const NonlinearModel& model,
                                    const Eigen::VectorXd& u, int quadrature_order = -1);

/// total / ||grad u - Pi1 u_h||.
double effectivity(double total, const VemSpace& space, const NonlinearModel& model,
                   const Eigen::VectorXd& u);

/// max_E eta_E^2 / sum over the vertex patch of (err^2 + S^2 + Theta^2).
double efficiency_ratio(const PolyMesh& mesh, const Estimate& est,
                        const std::vector<double>& errors_sq);

}  // namespace quasivem
