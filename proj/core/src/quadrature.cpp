#include "quasivem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace quasivem {

namespace {

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

EdgeRule edge_rule(int order) {
  const int n = std::max(1, (order + 2) / 2);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  EdgeRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

QuadratureRule triangle_rule(const std::array<Point, 3>& tri, int order) {
  // The collapse Jacobian adds one degree in the radial direction.
  const int n = std::max(1, (order + 3) / 2);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const Point e1 = tri[1] - tri[0];
  const Point e2 = tri[2] - tri[0];
  const double jac = std::abs(cross(e1, e2));
  QuadratureRule rule;
  rule.degree = std::max(order, 0);
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (x[i] + 1.0);
    const double wu = 0.5 * w[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (x[j] + 1.0);
      const double wv = 0.5 * w[j];
      const double xi = u;
      const double eta = v * (1.0 - u);
      rule.points.push_back(tri[0] + xi * e1 + eta * e2);
      rule.weights.push_back(wu * wv * (1.0 - u) * jac);
    }
  }
  return rule;
}

QuadratureRule polygon_rule(std::span<const Point> polygon, const Point& star, int order) {
  QuadratureRule rule;
  rule.degree = std::max(order, 0);
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto tri = triangle_rule({star, polygon[i], polygon[(i + 1) % polygon.size()]}, order);
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return rule;
}

QuadratureRule element_rule(const PolyMesh& mesh, Index e, int order) {
  const auto triangles = sub_triangulate(mesh, e);
  QuadratureRule rule;
  rule.degree = std::max(order, 0);
  for (const auto& t : triangles) {
    const auto tri = triangle_rule(t, order);
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return rule;
}

}  // namespace quasivem
