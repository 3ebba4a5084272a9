#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "quasivem/poly.hpp"

using namespace quasivem;
using namespace testing_helpers;
using std::numbers::pi;

namespace {

MonomialBasis basis_on(const PolyMesh& m, int k) { return {m.barycenter(0), m.diameter(0), k}; }

}  // namespace

TEST(MonomialBasis, DimensionAndOrdering) {
  EXPECT_EQ(poly_dim(-1), 0);
  EXPECT_EQ(poly_dim(0), 1);
  EXPECT_EQ(poly_dim(3), 10);
  const std::array<std::array<int, 2>, 6> expected{{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(MonomialBasis::exponent(i), expected[i]);
    EXPECT_EQ(MonomialBasis::index(expected[i][0], expected[i][1]), i);
  }
  for (int i = 0; i < poly_dim(6); ++i) {
    const auto [a, b] = MonomialBasis::exponent(i);
    EXPECT_EQ(MonomialBasis::index(a, b), i);
  }
}

TEST(MonomialBasis, ValuesAndGradients) {
  const MonomialBasis b({0.3, -0.2}, 0.5, 3);
  const Point x(0.7, 0.4);
  const Eigen::VectorXd v = b.evaluate(x);
  const Point s = b.scaled(x);
  for (int i = 0; i < b.size(); ++i) {
    const auto [a, c] = MonomialBasis::exponent(i);
    EXPECT_NEAR(v[i], std::pow(s.x(), a) * std::pow(s.y(), c), 1e-15);
  }
  const Eigen::Matrix2Xd g = b.gradient(x);
  const double h = 1e-6;
  for (int i = 0; i < b.size(); ++i) {
    const double dx = (b.evaluate(x + Point(h, 0))[i] - b.evaluate(x - Point(h, 0))[i]) / (2 * h);
    const double dy = (b.evaluate(x + Point(0, h))[i] - b.evaluate(x - Point(0, h))[i]) / (2 * h);
    EXPECT_NEAR(g(0, i), dx, 1e-8);
    EXPECT_NEAR(g(1, i), dy, 1e-8);
  }
}

TEST(MassMatrix, ConstantOnUnitSquare) {
  const PolyMesh sq = unit_square();
  const Eigen::MatrixXd m = mass_matrix(basis_on(sq, 0), element_rule(sq, 0, 2));
  ASSERT_EQ(m.rows(), 1);
  EXPECT_NEAR(m(0, 0), 1.0, 1e-15);
}

TEST(MassMatrix, CentredLinearBasisDecouplesOnSquare) {
  const PolyMesh sq = unit_square();
  const Eigen::MatrixXd m = mass_matrix(basis_on(sq, 1), element_rule(sq, 0, 2));
  EXPECT_NEAR(m(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(m(0, 2), 0.0, 1e-15);
  EXPECT_NEAR(m(1, 2), 0.0, 1e-15);
}

TEST(MassMatrix, PentagonAgainstStripOracle) {
  const PolyMesh pent = pentagon();
  const MonomialBasis b = basis_on(pent, 2);
  const Eigen::MatrixXd m = mass_matrix(b, element_rule(pent, 0, 4));
  for (int i = 0; i < b.size(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const double oracle = strip_integral(
          pent.element_polygon(0), [&](const Point& p) { const auto v = b.evaluate(p); return v[i] * v[j]; },
          100000);
      EXPECT_NEAR(m(i, j), oracle, 1e-8);
      EXPECT_DOUBLE_EQ(m(i, j), m(j, i));
    }
  }
}

TEST(L2Project, ReproducesPolynomials) {
  const PolyMesh pent = pentagon();
  const MonomialBasis b = basis_on(pent, 3);
  const QuadratureRule rule = element_rule(pent, 0, 8);
  const Polynomial px = l2_project([](const Point& p) { return p.x(); }, b, rule);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(b.size());
  expected[0] = b.centre().x();
  expected[1] = b.scale();
  EXPECT_LE((px.coeffs - expected).norm(), 1e-11);
  const TestPolynomial cubic{3};
  const Polynomial pc = l2_project(cubic, b, rule);
  for (const Point& x : pent.element_polygon(0)) EXPECT_NEAR(pc(x), cubic(x), 1e-11);
}

TEST(L2Project, DegreeZeroIsMean) {
  const PolyMesh pent = pentagon();
  const QuadratureRule rule = element_rule(pent, 0, 10);
  auto f = [](const Point& p) { return std::exp(p.x() - p.y()); };
  const Polynomial p0 = l2_project(f, basis_on(pent, 0), rule);
  EXPECT_NEAR(p0.coeffs[0], rule.integrate(f) / pent.area(0), 1e-14);
}

TEST(L2Project, SineAgainstHighOrderNormalEquations) {
  const PolyMesh sq = unit_square();
  const MonomialBasis b = basis_on(sq, 2);
  auto f = [](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); };
  const Polynomial p = l2_project(f, b, element_rule(sq, 0, 16));
  // Oracle: normal equations assembled with a degree-20 rule on the two halves.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(b.size(), b.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(b.size());
  for (const auto& tri : {std::array<Point, 3>{Point(0, 0), Point(1, 0), Point(1, 1)},
                          std::array<Point, 3>{Point(0, 0), Point(1, 1), Point(0, 1)}}) {
    const QuadratureRule r = triangle_rule(tri, 20);
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Eigen::VectorXd v = b.evaluate(r.points[q]);
      a += r.weights[q] * v * v.transpose();
      rhs += r.weights[q] * f(r.points[q]) * v;
    }
  }
  const Eigen::VectorXd oracle = a.ldlt().solve(rhs);
  EXPECT_LE((p.coeffs - oracle).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(L2Project, IdempotentAndOrthogonal) {
  const PolyMesh pent = pentagon();
  const MonomialBasis b = basis_on(pent, 2);
  const QuadratureRule rule = element_rule(pent, 0, 12);
  auto f = [](const Point& p) { return std::cos(3 * p.x()) + p.y() * std::exp(p.x()); };
  const Polynomial p = l2_project(f, b, rule);
  const Polynomial pp = l2_project([&](const Point& x) { return p(x); }, b, rule);
  EXPECT_LE((p.coeffs - pp.coeffs).norm(), 1e-11);
  for (int i = 0; i < b.size(); ++i) {
    const double r = rule.integrate([&](const Point& x) { return (f(x) - p(x)) * b.evaluate(x)[i]; });
    EXPECT_NEAR(r, 0.0, 1e-10 * pent.area(0));
  }
}

TEST(L2Project, VectorFieldComponentwise) {
  const PolyMesh pent = pentagon();
  const MonomialBasis b = basis_on(pent, 1);
  const QuadratureRule rule = element_rule(pent, 0, 8);
  const VectorPolynomial v =
      l2_project([](const Point& p) { return Point(2 * p.x() - 1, p.y() + 3); }, b, rule);
  const Point x(0.1, 0.05);
  EXPECT_NEAR(v(x).x(), 2 * x.x() - 1, 1e-12);
  EXPECT_NEAR(v(x).y(), x.y() + 3, 1e-12);
}

TEST(L2Project, ErrorDecaysAtOrderKPlusOne) {
  auto f = [](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); };
  for (int k = 0; k <= 3; ++k) {
    std::vector<double> hs, errs;
    for (int level = 2; level <= 5; ++level) {
      const double h = 1.0 / (1 << level);
      const PolyMesh sq = single_element({{0.2, 0.3}, {0.2 + h, 0.3}, {0.2 + h, 0.3 + h}, {0.2, 0.3 + h}});
      const QuadratureRule rule = element_rule(sq, 0, 2 * k + 8);
      const Polynomial p = l2_project(f, basis_on(sq, k), rule);
      const double e = std::sqrt(rule.integrate([&](const Point& x) { return std::pow(f(x) - p(x), 2); }));
      hs.push_back(h);
      // Normalise by the element size so the rate is the local approximation order.
      errs.push_back(e / h);
    }
    EXPECT_NEAR(log_slope(hs, errs), k + 1, 0.2) << "k = " << k;
  }
}

TEST(PolyCalculus, DivergenceExamples) {
  const MonomialBasis b({0.1, 0.2}, 0.5, 3);
  const double h = b.scale();
  auto mono = [&](int a, int c) {
    Polynomial p = Polynomial::zero(b);
    p.coeffs[MonomialBasis::index(a, c)] = 1.0;
    return p;
  };
  const Polynomial d1 = poly_divergence({mono(1, 0), mono(0, 1)});
  EXPECT_NEAR(d1({0.4, -0.3}), 2.0 / h, 1e-14);
  const Polynomial d0 = poly_divergence({mono(0, 0), mono(0, 0)});
  EXPECT_EQ(d0.coeffs.norm(), 0.0);

  const VectorPolynomial v{mono(2, 1), mono(1, 2)};
  const Polynomial d = poly_divergence(v);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    const Point x(uniform01(rng), uniform01(rng));
    const Point s = b.scaled(x);
    EXPECT_NEAR(d(x), 4.0 / h * s.x() * s.y(), 1e-12);
    const double e = 1e-5;
    const double fd = (v.x(x + Point(e, 0)) - v.x(x - Point(e, 0)) + v.y(x + Point(0, e)) -
                       v.y(x - Point(0, e))) / (2 * e);
    EXPECT_NEAR(d(x), fd, 1e-6);
  }
}

TEST(PolyCalculus, ProductAndSumsArePointwise) {
  const MonomialBasis b2({0.0, 0.5}, 0.8, 2);
  const MonomialBasis b1 = b2.with_degree(1);
  const Polynomial p(b2, (Eigen::VectorXd(6) << 1, -2, 0.5, 0.3, 0.7, -1).finished());
  const Polynomial q(b1, (Eigen::VectorXd(3) << 0.2, 1.5, -0.4).finished());
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Point x(uniform01(rng), uniform01(rng));
    EXPECT_NEAR((p * q)(x), p(x) * q(x), 1e-13);
    EXPECT_NEAR((p + q)(x), p(x) + q(x), 1e-13);
    EXPECT_NEAR((p - q)(x), p(x) - q(x), 1e-13);
    const double e = 1e-6;
    EXPECT_NEAR(p.dx()(x), (p(x + Point(e, 0)) - p(x - Point(e, 0))) / (2 * e), 1e-7);
    EXPECT_NEAR(p.dy()(x), (p(x + Point(0, e)) - p(x - Point(0, e))) / (2 * e), 1e-7);
  }
  EXPECT_EQ((p * q).degree(), 3);
}
