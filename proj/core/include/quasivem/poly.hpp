#pragma once

#include <array>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "quasivem/geometry.hpp"
#include "quasivem/quadrature.hpp"

namespace quasivem {

/// Number of monomials of total degree <= k in two variables.
constexpr int poly_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Scaled monomials m_a(x) = ((x - centre) / scale)^a on one element.
///
/// Exponents are graded lexicographic: (0,0), (1,0), (0,1), (2,0), (1,1),
/// (0,2), ... so the basis of degree k-1 is a prefix of the basis of degree k.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(const Point& centre, double scale, int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int size() const { return poly_dim(degree_); }
  [[nodiscard]] const Point& centre() const { return centre_; }
  [[nodiscard]] double scale() const { return scale_; }

  /// Position of x^a y^b in the graded ordering.
  static constexpr int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }
  /// Inverse of index().
  static std::array<int, 2> exponent(int i);

  [[nodiscard]] Point scaled(const Point& x) const { return (x - centre_) / scale_; }

  /// Values of all basis functions at x.
  [[nodiscard]] Eigen::VectorXd evaluate(const Point& x) const;
  void evaluate(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const;

  /// Physical gradients of all basis functions at x, as a 2 x size() matrix.
  [[nodiscard]] Eigen::Matrix2Xd gradient(const Point& x) const;

  /// Same basis with a different degree.
  [[nodiscard]] MonomialBasis with_degree(int k) const { return {centre_, scale_, k}; }

 private:
  Point centre_ = Point::Zero();
  double scale_ = 1.0;
  int degree_ = 0;
};

/// Scalar polynomial in a MonomialBasis.
struct Polynomial {
  MonomialBasis basis;
  Eigen::VectorXd coeffs;

  Polynomial() = default;
  Polynomial(MonomialBasis b, Eigen::VectorXd c) : basis(std::move(b)), coeffs(std::move(c)) {}
  static Polynomial zero(const MonomialBasis& b) {
    return {b, Eigen::VectorXd::Zero(b.size())};
  }

  [[nodiscard]] int degree() const { return basis.degree(); }
  [[nodiscard]] double operator()(const Point& x) const;

  /// Partial derivatives in physical coordinates (degree drops by one).
  [[nodiscard]] Polynomial dx() const;
  [[nodiscard]] Polynomial dy() const;

  /// Same polynomial expressed with a higher-degree basis.
  [[nodiscard]] Polynomial raised(int k) const;
};

/// Vector field with polynomial components in a common basis.
struct VectorPolynomial {
  Polynomial x;
  Polynomial y;

  [[nodiscard]] Point operator()(const Point& p) const { return {x(p), y(p)}; }
};

[[nodiscard]] Polynomial operator+(const Polynomial& a, const Polynomial& b);
[[nodiscard]] Polynomial operator-(const Polynomial& a, const Polynomial& b);
/// Exact product; both factors must share centre and scale.
[[nodiscard]] Polynomial operator*(const Polynomial& a, const Polynomial& b);
[[nodiscard]] VectorPolynomial operator*(const Polynomial& a, const VectorPolynomial& v);

[[nodiscard]] VectorPolynomial gradient(const Polynomial& p);

/// Exact divergence; the degree drops by one (a degree-0 field gives zero).
[[nodiscard]] Polynomial poly_divergence(const VectorPolynomial& v);

/// Gram matrix of the basis, integrated with `rule`.
///
/// Throws LinearAlgebraError when the condition estimate exceeds 1e12.
Eigen::MatrixXd mass_matrix(const MonomialBasis& basis, const QuadratureRule& rule);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// L2-orthogonal projection onto the span of `basis` using `rule`.
Polynomial l2_project(const ScalarField& f, const MonomialBasis& basis,
                      const QuadratureRule& rule);
VectorPolynomial l2_project(const VectorField& f, const MonomialBasis& basis,
                            const QuadratureRule& rule);

/// Projection from precomputed values of f at the rule's points, reusing a
/// factorised mass matrix.
Eigen::VectorXd project_values(const Eigen::LLT<Eigen::MatrixXd>& mass,
                               const Eigen::MatrixXd& basis_at_points,
                               const QuadratureRule& rule, const Eigen::VectorXd& values);

}  // namespace quasivem
