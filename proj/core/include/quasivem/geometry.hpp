#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace quasivem {

using Point = Eigen::Vector2d;
using Index = int;

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed area of a closed polygon (positive for counter-clockwise order).
double signed_area(std::span<const Point> polygon);

/// Area centroid of a polygon with nonzero area.
Point area_centroid(std::span<const Point> polygon);

/// Largest distance between two vertices.
double diameter(std::span<const Point> polygon);

/// True when no two non-adjacent edges intersect.
bool is_simple(std::span<const Point> polygon);

/// Convexity test for a counter-clockwise polygon; collinear vertices are
/// accepted. `tol` bounds the sine of the admissible reflex turn.
bool is_convex(std::span<const Point> polygon, double tol = 1e-10);

/// True when the turn at vertex i is a genuine corner (not a collinear vertex).
bool is_corner(std::span<const Point> polygon, std::size_t i, double tol = 1e-10);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(const Point& p, const Point& a, const Point& b);

/// Clip a convex polygon to the half plane { x : normal . x <= offset }.
std::vector<Point> clip_half_plane(std::span<const Point> polygon, const Point& normal,
                                   double offset);

/// Even-odd point containment; points on the boundary may go either way.
bool contains(std::span<const Point> polygon, const Point& p);

}  // namespace quasivem
