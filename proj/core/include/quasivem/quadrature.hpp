#pragma once

#include <array>
#include <span>
#include <vector>

#include "quasivem/mesh.hpp"

namespace quasivem {

/// Gauss-Legendre rule on [0, 1].
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Rule on a planar region with positive weights.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }

  template <class F>
  [[nodiscard]] double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q) sum += weights[q] * f(points[q]);
    return sum;
  }
};

/// Gauss-Legendre with ceil((order+1)/2) points, exact for degree `order`.
EdgeRule edge_rule(int order);

/// Collapsed (Duffy) Gauss product rule on a triangle, exact for degree `order`.
QuadratureRule triangle_rule(const std::array<Point, 3>& triangle, int order);

/// Composite rule over the barycentric sub-triangulation of element `e`.
QuadratureRule element_rule(const PolyMesh& mesh, Index e, int order);

/// Composite rule over the fan from `star` of an arbitrary star-shaped polygon.
QuadratureRule polygon_rule(std::span<const Point> polygon, const Point& star, int order);

}  // namespace quasivem
