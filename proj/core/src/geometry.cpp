#include "quasivem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace quasivem {

double signed_area(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return 0.5 * twice;
}

Point area_centroid(std::span<const Point> polygon) {
  // Shift to the first vertex to limit cancellation on small elements.
  const std::size_t n = polygon.size();
  const Point origin = polygon[0];
  double twice_area = 0.0;
  Point moment = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i] - origin;
    const Point b = polygon[(i + 1) % n] - origin;
    const double c = cross(a, b);
    twice_area += c;
    moment += c * (a + b);
  }
  return origin + moment / (3.0 * twice_area);
}

double diameter(std::span<const Point> polygon) {
  double d = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    for (std::size_t j = i + 1; j < polygon.size(); ++j) {
      d = std::max(d, (polygon[i] - polygon[j]).norm());
    }
  }
  return d;
}

namespace {

int orientation(const Point& a, const Point& b, const Point& c, double eps) {
  const double v = cross(b - a, c - a);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d,
                        double eps) {
  const int o1 = orientation(a, b, c, eps);
  const int o2 = orientation(a, b, d, eps);
  const int o3 = orientation(c, d, a, eps);
  const int o4 = orientation(c, d, b, eps);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

bool is_simple(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  const double scale = diameter(polygon);
  const double eps = 1e-14 * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    if ((b - a).norm() <= 1e-14 * scale) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n], eps)) return false;
    }
  }
  return true;
}

bool is_corner(std::span<const Point> polygon, std::size_t i, double tol) {
  const std::size_t n = polygon.size();
  const Point in = polygon[i] - polygon[(i + n - 1) % n];
  const Point out = polygon[(i + 1) % n] - polygon[i];
  return std::abs(cross(in, out)) > tol * in.norm() * out.norm();
}

bool is_convex(std::span<const Point> polygon, double tol) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point in = polygon[i] - polygon[(i + n - 1) % n];
    const Point out = polygon[(i + 1) % n] - polygon[i];
    const double c = cross(in, out);
    if (c < -tol * in.norm() * out.norm()) return false;
    // Reversal (a 180 degree turn) is not convex either.
    if (std::abs(c) <= tol * in.norm() * out.norm() && in.dot(out) < 0.0) return false;
  }
  return signed_area(polygon) > 0.0;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

std::vector<Point> clip_half_plane(std::span<const Point> polygon, const Point& normal,
                                   double offset) {
  std::vector<Point> out;
  const std::size_t n = polygon.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const double da = normal.dot(a) - offset;
    const double db = normal.dot(b) - offset;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

bool contains(std::span<const Point> polygon, const Point& p) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace quasivem
