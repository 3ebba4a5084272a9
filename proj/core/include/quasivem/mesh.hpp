#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "quasivem/geometry.hpp"

namespace quasivem {

/// Undirected mesh edge. `v0 < v1`; `right` is -1 on the domain boundary.
struct Edge {
  Index v0 = -1;
  Index v1 = -1;
  Index left = -1;
  Index right = -1;

  [[nodiscard]] bool on_boundary() const { return right < 0; }
};

/// Polygonal tessellation of a planar domain.
///
/// Elements are counter-clockwise vertex cycles. A hanging node is simply a
/// collinear vertex of the coarser neighbour, so every mesh edge is shared by
/// exactly one or two elements. The mesh is immutable once constructed.
class PolyMesh {
 public:
  PolyMesh() = default;

  /// Validates the input and derives edges, boundary flags and geometry.
  /// Throws GeometryError on clockwise, self-intersecting or non-manifold input.
  PolyMesh(std::vector<Point> vertices, std::vector<std::vector<Index>> elements);

  [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t num_elements() const { return elements_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const Point& vertex(Index v) const { return vertices_[v]; }
  [[nodiscard]] std::span<const Index> element(Index e) const { return elements_[e]; }
  [[nodiscard]] const std::vector<std::vector<Index>>& elements() const { return elements_; }

  /// Vertex coordinates of element `e` in cycle order.
  [[nodiscard]] std::vector<Point> element_polygon(Index e) const;

  [[nodiscard]] const Edge& edge(Index ed) const { return edges_[ed]; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  /// Global edge id of the local edge from vertex i to vertex i+1 of element e.
  [[nodiscard]] Index element_edge(Index e, std::size_t i) const { return element_edges_[e][i]; }
  [[nodiscard]] std::span<const Index> element_edges(Index e) const { return element_edges_[e]; }

  /// The element on the other side of edge `ed`, or -1 on the boundary.
  [[nodiscard]] Index neighbour(Index e, Index ed) const;

  [[nodiscard]] bool is_boundary_vertex(Index v) const { return boundary_vertex_[v] != 0; }
  [[nodiscard]] bool is_boundary_edge(Index ed) const { return edges_[ed].on_boundary(); }

  [[nodiscard]] double area(Index e) const { return areas_[e]; }
  [[nodiscard]] double diameter(Index e) const { return diameters_[e]; }
  [[nodiscard]] const Point& barycenter(Index e) const { return centroids_[e]; }
  [[nodiscard]] double edge_length(Index ed) const;

  /// h = max over elements of diam(E).
  [[nodiscard]] double mesh_size() const { return mesh_size_; }
  [[nodiscard]] double total_area() const;

  /// Axis-aligned bounding box as {xmin, ymin, xmax, ymax}.
  [[nodiscard]] std::array<double, 4> bounding_box() const;

  /// Elements sharing at least one vertex with `e` (including `e`), sorted.
  [[nodiscard]] std::vector<Index> vertex_patch(Index e) const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::vector<Index>> elements_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> element_edges_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<std::vector<Index>> vertex_elements_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<Point> centroids_;
  double mesh_size_ = 0.0;
};

/// Axis-aligned rectangle, optionally with the lower-right quadrant
/// [xmid, xmax) x (ymin, ymid] removed (the classic L-shape).
struct Domain {
  enum class Kind { rectangle, l_shape };

  Kind kind = Kind::rectangle;
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 1.0;
  double ymax = 1.0;

  static Domain unit_square() { return {}; }
  /// (-1,1)^2 without [0,1) x (-1,0].
  static Domain l_shape() { return {Kind::l_shape, -1.0, -1.0, 1.0, 1.0}; }

  [[nodiscard]] double area() const;
  /// Boundary polygon, counter-clockwise.
  [[nodiscard]] std::vector<Point> boundary() const;
  [[nodiscard]] bool contains(const Point& p) const;
};

/// Regularity measures: min_e h_e / h_E and an inscribed-ball radius
/// (distance from the barycentre to the boundary) over h_E.
struct RegularityReport {
  std::vector<double> edge_ratio;
  std::vector<double> ball_ratio;
  double rho = 0.0;
};

/// Structured nx-by-ny quadrilateral grid. For an L-shaped domain the cells
/// inside the removed quadrant are dropped.
PolyMesh build_cartesian_grid(int nx, int ny, const Domain& domain = Domain::unit_square());

/// Lloyd-smoothed Voronoi tessellation clipped to the domain.
///
/// Seeds are drawn uniformly from `rng_seed`. The L-shape is handled as two
/// convex pieces split along the diagonal through the re-entrant corner;
/// seeds are shared between the pieces by area and the seam is made
/// conforming with collinear vertices, so every cell is convex.
PolyMesh build_voronoi_mesh(int n_seeds, const Domain& domain, int lloyd_iters,
                            std::uint64_t rng_seed);

/// Midpoint-barycentre refinement of the marked elements.
///
/// Each marked element with n straight sides is split into n quadrilaterals
/// by joining the midpoint of every straight side to the barycentre. The new
/// midpoints become collinear vertices of unmarked neighbours. Throws
/// GeometryError if a marked element is not convex.
PolyMesh refine(const PolyMesh& mesh, std::span<const Index> marked);

/// Refine every element once.
PolyMesh refine_uniform(const PolyMesh& mesh);

/// Triangle fan from the barycentre, one triangle per mesh edge of `e`.
std::vector<std::array<Point, 3>> sub_triangulate(const PolyMesh& mesh, Index e);

RegularityReport regularity_check(const PolyMesh& mesh);

}  // namespace quasivem
