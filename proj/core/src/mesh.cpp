#include "quasivem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "quasivem/error.hpp"

namespace quasivem {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

std::string element_name(std::size_t e) { return "element " + std::to_string(e); }

}  // namespace

PolyMesh::PolyMesh(std::vector<Point> vertices, std::vector<std::vector<Index>> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  const auto nv = static_cast<Index>(vertices_.size());
  const std::size_t ne = elements_.size();
  areas_.resize(ne);
  diameters_.resize(ne);
  centroids_.resize(ne);
  element_edges_.resize(ne);
  boundary_vertex_.assign(vertices_.size(), 0);

  std::unordered_map<std::uint64_t, Index> edge_ids;
  // Direction in which the first incident element traverses the edge.
  std::vector<bool> left_forward;

  for (std::size_t e = 0; e < ne; ++e) {
    const auto& cycle = elements_[e];
    if (cycle.size() < 3) throw GeometryError(element_name(e) + " has fewer than 3 vertices");
    for (Index v : cycle) {
      if (v < 0 || v >= nv) throw GeometryError(element_name(e) + " references a bad vertex");
    }
    {
      auto sorted = cycle;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw GeometryError(element_name(e) + " repeats a vertex");
      }
    }
    const auto poly = element_polygon(static_cast<Index>(e));
    areas_[e] = signed_area(poly);
    if (!(areas_[e] > 0.0)) {
      throw GeometryError(element_name(e) + " is not counter-clockwise with positive area");
    }
    if (!is_simple(poly)) throw GeometryError(element_name(e) + " is not a simple polygon");
    diameters_[e] = quasivem::diameter(poly);
    centroids_[e] = area_centroid(poly);
    mesh_size_ = std::max(mesh_size_, diameters_[e]);

    auto& local_edges = element_edges_[e];
    local_edges.resize(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Index a = cycle[i];
      const Index b = cycle[(i + 1) % cycle.size()];
      const auto key = edge_key(a, b);
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        const auto id = static_cast<Index>(edges_.size());
        edge_ids.emplace(key, id);
        edges_.push_back({std::min(a, b), std::max(a, b), static_cast<Index>(e), -1});
        left_forward.push_back(a < b);
        local_edges[i] = id;
      } else {
        Edge& edge = edges_[it->second];
        if (edge.right >= 0) {
          throw GeometryError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") is shared by more than two elements");
        }
        if (left_forward[it->second] == (a < b)) {
          throw GeometryError("elements " + std::to_string(edge.left) + " and " +
                              std::to_string(e) + " traverse a shared edge in the same direction");
        }
        edge.right = static_cast<Index>(e);
        local_edges[i] = it->second;
      }
    }
  }

  vertex_elements_.resize(vertices_.size());
  for (std::size_t e = 0; e < ne; ++e) {
    for (Index v : elements_[e]) vertex_elements_[v].push_back(static_cast<Index>(e));
  }

  for (const Edge& edge : edges_) {
    if (edge.on_boundary()) {
      boundary_vertex_[edge.v0] = 1;
      boundary_vertex_[edge.v1] = 1;
    }
  }
}

std::vector<Point> PolyMesh::element_polygon(Index e) const {
  std::vector<Point> poly;
  poly.reserve(elements_[e].size());
  for (Index v : elements_[e]) poly.push_back(vertices_[v]);
  return poly;
}

Index PolyMesh::neighbour(Index e, Index ed) const {
  const Edge& edge = edges_[ed];
  if (edge.left == e) return edge.right;
  return edge.left;
}

double PolyMesh::edge_length(Index ed) const {
  return (vertices_[edges_[ed].v1] - vertices_[edges_[ed].v0]).norm();
}

double PolyMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

std::array<double, 4> PolyMesh::bounding_box() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<double, 4> box{inf, inf, -inf, -inf};
  for (const Point& p : vertices_) {
    box[0] = std::min(box[0], p.x());
    box[1] = std::min(box[1], p.y());
    box[2] = std::max(box[2], p.x());
    box[3] = std::max(box[3], p.y());
  }
  return box;
}

std::vector<Index> PolyMesh::vertex_patch(Index e) const {
  std::vector<Index> patch;
  for (Index v : elements_[e]) {
    patch.insert(patch.end(), vertex_elements_[v].begin(), vertex_elements_[v].end());
  }
  std::sort(patch.begin(), patch.end());
  patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
  return patch;
}

std::vector<std::array<Point, 3>> sub_triangulate(const PolyMesh& mesh, Index e) {
  const auto poly = mesh.element_polygon(e);
  if (!is_convex(poly)) {
    throw GeometryError("element " + std::to_string(e) +
                        " is not convex; cannot fan from the barycentre");
  }
  const Point& c = mesh.barycenter(e);
  std::vector<std::array<Point, 3>> triangles;
  triangles.reserve(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    triangles.push_back({c, poly[i], poly[(i + 1) % poly.size()]});
  }
  return triangles;
}

RegularityReport regularity_check(const PolyMesh& mesh) {
  RegularityReport report;
  const std::size_t ne = mesh.num_elements();
  report.edge_ratio.resize(ne);
  report.ball_ratio.resize(ne);
  report.rho = 1.0;
  for (std::size_t e = 0; e < ne; ++e) {
    const auto id = static_cast<Index>(e);
    const double h = mesh.diameter(id);
    const Point& c = mesh.barycenter(id);
    double min_edge = std::numeric_limits<double>::infinity();
    double radius = std::numeric_limits<double>::infinity();
    const auto cycle = mesh.element(id);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Point& a = mesh.vertex(cycle[i]);
      const Point& b = mesh.vertex(cycle[(i + 1) % cycle.size()]);
      min_edge = std::min(min_edge, (b - a).norm());
      radius = std::min(radius, point_segment_distance(c, a, b));
    }
    report.edge_ratio[e] = min_edge / h;
    report.ball_ratio[e] = radius / h;
    report.rho = std::min({report.rho, report.edge_ratio[e], report.ball_ratio[e]});
  }
  return report;
}

// Refinement ---------------------------------------------------------------

namespace {

struct SplitPoint {
  double param;  // position along the edge measured from its lower vertex id
  Index vertex;
};

}  // namespace

PolyMesh refine(const PolyMesh& mesh, std::span<const Index> marked) {
  const std::size_t ne = mesh.num_elements();
  std::vector<std::uint8_t> is_marked(ne, 0);
  for (Index e : marked) {
    if (e < 0 || static_cast<std::size_t>(e) >= ne) {
      throw GeometryError("marked element " + std::to_string(e) + " does not exist");
    }
    is_marked[e] = 1;
  }

  std::vector<Point> vertices = mesh.vertices();
  std::map<std::uint64_t, std::vector<SplitPoint>> splits;

  auto add_vertex = [&](const Point& p) {
    vertices.push_back(p);
    return static_cast<Index>(vertices.size() - 1);
  };

  // Per marked element: local indices of corners and the midpoint vertex of
  // the straight side starting at each corner.
  struct Plan {
    std::vector<std::size_t> corners;
    std::vector<Index> midpoints;
    Index centre = -1;
  };
  std::vector<Plan> plans(ne);

  for (std::size_t e = 0; e < ne; ++e) {
    if (!is_marked[e]) continue;
    const auto id = static_cast<Index>(e);
    const auto poly = mesh.element_polygon(id);
    if (!is_convex(poly)) {
      throw GeometryError("cannot refine element " + std::to_string(e) + ": it is not convex");
    }
    const auto cycle = mesh.element(id);
    const std::size_t n = cycle.size();
    const double tol = 1e-12 * mesh.diameter(id);
    Plan& plan = plans[e];
    for (std::size_t i = 0; i < n; ++i) {
      if (is_corner(poly, i)) plan.corners.push_back(i);
    }
    const std::size_t nc = plan.corners.size();
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t start = plan.corners[c];
      const std::size_t stop = plan.corners[(c + 1) % nc];
      const Point mid = 0.5 * (poly[start] + poly[stop]);
      // Walk the sub-edges of this straight side to locate the midpoint.
      Index mid_vertex = -1;
      for (std::size_t k = start; mid_vertex < 0; k = (k + 1) % n) {
        const std::size_t k1 = (k + 1) % n;
        if ((poly[k1] - mid).norm() <= tol) {
          mid_vertex = cycle[k1];
          break;
        }
        if (point_segment_distance(mid, poly[k], poly[k1]) <= tol) {
          const Index a = cycle[k];
          const Index b = cycle[k1];
          const Point& lo = mesh.vertex(std::min(a, b));
          const double param = (mid - lo).norm();
          auto& list = splits[edge_key(a, b)];
          for (const SplitPoint& sp : list) {
            if ((vertices[sp.vertex] - mid).norm() <= tol) mid_vertex = sp.vertex;
          }
          if (mid_vertex < 0) {
            mid_vertex = add_vertex(mid);
            list.push_back({param, mid_vertex});
          }
        }
        if (k1 == stop && mid_vertex < 0) {
          throw GeometryError("midpoint of a side of element " + std::to_string(e) +
                              " not found on its boundary");
        }
      }
      plan.midpoints.push_back(mid_vertex);
    }
    plan.centre = add_vertex(mesh.barycenter(id));
  }

  for (auto& [key, list] : splits) {
    std::sort(list.begin(), list.end(),
              [](const SplitPoint& a, const SplitPoint& b) { return a.param < b.param; });
  }

  std::vector<std::vector<Index>> elements;
  elements.reserve(ne + 3 * marked.size());
  for (std::size_t e = 0; e < ne; ++e) {
    const auto cycle = mesh.element(static_cast<Index>(e));
    const std::size_t n = cycle.size();
    // Expanded cycle with the split points spliced in.
    std::vector<Index> expanded;
    for (std::size_t i = 0; i < n; ++i) {
      const Index a = cycle[i];
      const Index b = cycle[(i + 1) % n];
      expanded.push_back(a);
      auto it = splits.find(edge_key(a, b));
      if (it == splits.end()) continue;
      if (a < b) {
        for (const SplitPoint& sp : it->second) expanded.push_back(sp.vertex);
      } else {
        for (auto r = it->second.rbegin(); r != it->second.rend(); ++r) expanded.push_back(r->vertex);
      }
    }
    if (!is_marked[e]) {
      elements.push_back(std::move(expanded));
      continue;
    }
    const Plan& plan = plans[e];
    const std::size_t m = expanded.size();
    auto locate = [&](Index v) {
      return static_cast<std::size_t>(std::find(expanded.begin(), expanded.end(), v) -
                                      expanded.begin());
    };
    const std::size_t nc = plan.corners.size();
    for (std::size_t c = 0; c < nc; ++c) {
      // Child around corner c: previous side's midpoint -> corner -> this
      // side's midpoint -> barycentre.
      const std::size_t from = locate(plan.midpoints[(c + nc - 1) % nc]);
      const std::size_t to = locate(plan.midpoints[c]);
      std::vector<Index> child;
      for (std::size_t k = from;; k = (k + 1) % m) {
        child.push_back(expanded[k]);
        if (k == to) break;
      }
      child.push_back(plan.centre);
      elements.push_back(std::move(child));
    }
  }

  return PolyMesh(std::move(vertices), std::move(elements));
}

PolyMesh refine_uniform(const PolyMesh& mesh) {
  std::vector<Index> all(mesh.num_elements());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = static_cast<Index>(e);
  return refine(mesh, all);
}

}  // namespace quasivem
