#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "quasivem/mesh.hpp"
#include "quasivem/model.hpp"
#include "quasivem/poly.hpp"
#include "quasivem/quadrature.hpp"

namespace testing_helpers {

using quasivem::Index;
using quasivem::Point;
using quasivem::PolyMesh;

inline PolyMesh single_element(std::vector<Point> polygon) {
  std::vector<Index> cycle(polygon.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) cycle[i] = static_cast<Index>(i);
  return PolyMesh(std::move(polygon), {cycle});
}

inline std::vector<Point> regular_polygon(int n, double radius = 1.0, Point centre = {0, 0}) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n + 0.3;
    out.emplace_back(centre + radius * Point(std::cos(a), std::sin(a)));
  }
  return out;
}

inline PolyMesh unit_square() { return single_element({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline PolyMesh pentagon() { return single_element(regular_polygon(5, 0.7, {0.2, -0.1})); }

/// Two unit squares side by side, [0,2] x [0,1].
inline PolyMesh two_squares() {
  return PolyMesh({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}, {{0, 1, 4, 3}, {1, 2, 5, 4}});
}

/// Integral over a convex polygon by horizontal strips: midpoint rule with
/// `rows` strips in y and 8-point Gauss-Legendre along each chord in x.
template <class F>
double strip_integral(const std::vector<Point>& polygon, F f, int rows) {
  double ymin = polygon[0].y(), ymax = polygon[0].y();
  for (const Point& p : polygon) {
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  const quasivem::EdgeRule gl = quasivem::edge_rule(15);
  const double dy = (ymax - ymin) / rows;
  double sum = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double y = ymin + (r + 0.5) * dy;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      const Point& a = polygon[i];
      const Point& b = polygon[(i + 1) % polygon.size()];
      if ((a.y() - y) * (b.y() - y) > 0.0 || a.y() == b.y()) continue;
      const double x = a.x() + (y - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi <= lo) continue;
    for (std::size_t q = 0; q < gl.size(); ++q) {
      sum += dy * (hi - lo) * gl.weights[q] * f(Point(lo + gl.points[q] * (hi - lo), y));
    }
  }
  return sum;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Least-squares slope of log(y) against log(x).
inline double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// A fixed polynomial of total degree `k` and its gradient.
struct TestPolynomial {
  int k;
  double operator()(const Point& p) const {
    const double x = p.x(), y = p.y();
    double v = 0.3 - 0.7 * x + 1.1 * y;
    if (k >= 2) v += 0.5 * x * x - 0.9 * x * y + 0.4 * y * y;
    if (k >= 3) v += 0.2 * x * x * x + 0.6 * x * x * y - 0.3 * x * y * y - 0.8 * y * y * y;
    return v;
  }
  Point gradient(const Point& p) const {
    const double x = p.x(), y = p.y();
    Point g(-0.7, 1.1);
    if (k >= 2) g += Point(x - 0.9 * y, -0.9 * x + 0.8 * y);
    if (k >= 3) {
      g += Point(0.6 * x * x + 1.2 * x * y - 0.3 * y * y, 0.6 * x * x - 0.6 * x * y - 2.4 * y * y);
    }
    return g;
  }
  double laplacian(const Point& p) const {
    const double x = p.x(), y = p.y();
    double l = 0.0;
    if (k >= 2) l += 1.0 + 0.8;
    if (k >= 3) l += 1.2 * x + 1.2 * y - 0.6 * x - 4.8 * y;
    return l;
  }
};

/// mu = 1 model whose exact solution is the test polynomial.
inline quasivem::NonlinearModel polynomial_model(int k) {
  const TestPolynomial p{k};
  auto model = quasivem::linear_model(
      1.0, [p](const Point& x) { return -p.laplacian(x); }, [p](const Point& x) { return p(x); });
  model.exact = [p](const Point& x) { return p(x); };
  model.exact_gradient = [p](const Point& x) { return p.gradient(x); };
  return model;
}

}  // namespace testing_helpers
