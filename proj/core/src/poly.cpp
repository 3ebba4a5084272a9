#include "quasivem/poly.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "quasivem/error.hpp"

namespace quasivem {

MonomialBasis::MonomialBasis(const Point& centre, double scale, int degree)
    : centre_(centre), scale_(scale), degree_(degree) {}

std::array<int, 2> MonomialBasis::exponent(int i) {
  int d = 0;
  while (poly_dim(d) <= i) ++d;
  const int b = i - poly_dim(d - 1);
  return {d - b, b};
}

void MonomialBasis::evaluate(const Point& x, Eigen::Ref<Eigen::VectorXd> out) const {
  const Point s = scaled(x);
  out[0] = 1.0;
  int k = 1;
  for (int d = 1; d <= degree_; ++d) {
    // First entry of degree d is x^d, the others multiply degree d-1 by y.
    const int prev = poly_dim(d - 2);
    out[k++] = out[prev] * s.x();
    for (int b = 1; b <= d; ++b) out[k++] = out[prev + b - 1] * s.y();
  }
}

Eigen::VectorXd MonomialBasis::evaluate(const Point& x) const {
  Eigen::VectorXd out(size());
  evaluate(x, out);
  return out;
}

Eigen::Matrix2Xd MonomialBasis::gradient(const Point& x) const {
  const int n = size();
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, n);
  if (degree_ == 0) return g;
  const Eigen::VectorXd lower = with_degree(degree_ - 1).evaluate(x);
  for (int i = 1; i < n; ++i) {
    const auto [a, b] = exponent(i);
    if (a > 0) g(0, i) = a * lower[index(a - 1, b)] / scale_;
    if (b > 0) g(1, i) = b * lower[index(a, b - 1)] / scale_;
  }
  return g;
}

double Polynomial::operator()(const Point& x) const { return basis.evaluate(x).dot(coeffs); }

Polynomial Polynomial::dx() const {
  const int k = std::max(degree() - 1, 0);
  Polynomial out = zero(basis.with_degree(k));
  for (int i = 1; i < basis.size(); ++i) {
    const auto [a, b] = MonomialBasis::exponent(i);
    if (a > 0) out.coeffs[MonomialBasis::index(a - 1, b)] += a * coeffs[i] / basis.scale();
  }
  return out;
}

Polynomial Polynomial::dy() const {
  const int k = std::max(degree() - 1, 0);
  Polynomial out = zero(basis.with_degree(k));
  for (int i = 1; i < basis.size(); ++i) {
    const auto [a, b] = MonomialBasis::exponent(i);
    if (b > 0) out.coeffs[MonomialBasis::index(a, b - 1)] += b * coeffs[i] / basis.scale();
  }
  return out;
}

Polynomial Polynomial::raised(int k) const {
  if (k <= degree()) return *this;
  Polynomial out = zero(basis.with_degree(k));
  out.coeffs.head(coeffs.size()) = coeffs;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const int k = std::max(a.degree(), b.degree());
  Polynomial out = a.raised(k);
  out.coeffs.head(b.coeffs.size()) += b.coeffs;
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  const int k = std::max(a.degree(), b.degree());
  Polynomial out = a.raised(k);
  out.coeffs.head(b.coeffs.size()) -= b.coeffs;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  assert((a.basis.centre() - b.basis.centre()).norm() == 0.0);
  assert(a.basis.scale() == b.basis.scale());
  Polynomial out = Polynomial::zero(a.basis.with_degree(a.degree() + b.degree()));
  for (int i = 0; i < a.basis.size(); ++i) {
    if (a.coeffs[i] == 0.0) continue;
    const auto [ai, bi] = MonomialBasis::exponent(i);
    for (int j = 0; j < b.basis.size(); ++j) {
      const auto [aj, bj] = MonomialBasis::exponent(j);
      out.coeffs[MonomialBasis::index(ai + aj, bi + bj)] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return out;
}

VectorPolynomial operator*(const Polynomial& a, const VectorPolynomial& v) {
  return {a * v.x, a * v.y};
}

VectorPolynomial gradient(const Polynomial& p) { return {p.dx(), p.dy()}; }

Polynomial poly_divergence(const VectorPolynomial& v) {
  const int k = std::max(v.x.degree(), v.y.degree());
  if (k == 0) return Polynomial::zero(v.x.basis.with_degree(0));
  return v.x.dx() + v.y.dy();
}

Eigen::MatrixXd mass_matrix(const MonomialBasis& basis, const QuadratureRule& rule) {
  const int n = basis.size();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd phi(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.evaluate(rule.points[q], phi);
    mass.noalias() += rule.weights[q] * phi * phi.transpose();
  }
  mass = 0.5 * (mass + mass.transpose()).eval();
  if (n > 1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mass, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      throw LinearAlgebraError("monomial mass matrix is singular (condition estimate " +
                               std::to_string(hi / lo) + ")");
    }
  } else if (!(mass(0, 0) > 0.0)) {
    throw LinearAlgebraError("monomial mass matrix is singular");
  }
  return mass;
}

Eigen::VectorXd project_values(const Eigen::LLT<Eigen::MatrixXd>& mass,
                               const Eigen::MatrixXd& basis_at_points,
                               const QuadratureRule& rule, const Eigen::VectorXd& values) {
  const auto w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(),
                                                   static_cast<Eigen::Index>(rule.size()));
  const int n = static_cast<int>(mass.matrixLLT().rows());
  const Eigen::VectorXd moments =
      basis_at_points.leftCols(n).transpose() * w.cwiseProduct(values);
  return mass.solve(moments);
}

Polynomial l2_project(const ScalarField& f, const MonomialBasis& basis,
                      const QuadratureRule& rule) {
  const Eigen::MatrixXd mass = mass_matrix(basis, rule);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.size());
  Eigen::VectorXd phi(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.evaluate(rule.points[q], phi);
    moments += rule.weights[q] * f(rule.points[q]) * phi;
  }
  return {basis, mass.llt().solve(moments)};
}

VectorPolynomial l2_project(const VectorField& f, const MonomialBasis& basis,
                            const QuadratureRule& rule) {
  const Eigen::MatrixXd mass = mass_matrix(basis, rule);
  Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(basis.size(), 2);
  Eigen::VectorXd phi(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.evaluate(rule.points[q], phi);
    const Point v = f(rule.points[q]);
    moments.col(0) += rule.weights[q] * v.x() * phi;
    moments.col(1) += rule.weights[q] * v.y() * phi;
  }
  const Eigen::MatrixXd c = mass.llt().solve(moments);
  return {{basis, c.col(0)}, {basis, c.col(1)}};
}

}  // namespace quasivem
