#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "quasivem/error.hpp"
#include "quasivem/mesh.hpp"

namespace quasivem {

double Domain::area() const {
  const double full = (xmax - xmin) * (ymax - ymin);
  return kind == Kind::l_shape ? 0.75 * full : full;
}

std::vector<Point> Domain::boundary() const {
  if (kind == Kind::rectangle) {
    return {Point(xmin, ymin), Point(xmax, ymin), Point(xmax, ymax), Point(xmin, ymax)};
  }
  const double xm = 0.5 * (xmin + xmax);
  const double ym = 0.5 * (ymin + ymax);
  return {Point(xmin, ymin), Point(xm, ymin), Point(xm, ym),
          Point(xmax, ym),   Point(xmax, ymax), Point(xmin, ymax)};
}

bool Domain::contains(const Point& p) const {
  if (p.x() < xmin || p.x() > xmax || p.y() < ymin || p.y() > ymax) return false;
  if (kind == Kind::rectangle) return true;
  const double xm = 0.5 * (xmin + xmax);
  const double ym = 0.5 * (ymin + ymax);
  return !(p.x() > xm && p.y() < ym);
}

PolyMesh build_cartesian_grid(int nx, int ny, const Domain& domain) {
  if (nx < 1 || ny < 1) throw GeometryError("grid needs nx, ny >= 1");
  if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin)) {
    throw GeometryError("domain has zero size");
  }
  const double dx = (domain.xmax - domain.xmin) / nx;
  const double dy = (domain.ymax - domain.ymin) / ny;
  const auto lattice = [&](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::vector<Index>> cells;
  std::vector<Index> used((nx + 1) * (ny + 1), -1);
  std::vector<Point> vertices;
  auto vertex = [&](int i, int j) {
    Index& id = used[lattice(i, j)];
    if (id < 0) {
      id = static_cast<Index>(vertices.size());
      vertices.emplace_back(domain.xmin + i * dx, domain.ymin + j * dy);
    }
    return id;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point centre(domain.xmin + (i + 0.5) * dx, domain.ymin + (j + 0.5) * dy);
      if (!domain.contains(centre)) continue;
      cells.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
    }
  }
  return PolyMesh(std::move(vertices), std::move(cells));
}

// Voronoi ---------------------------------------------------------------------

namespace {

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  // 53 random mantissa bits; std::uniform_real_distribution is not
  // guaranteed to be identical across standard libraries.
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Piece {
  std::vector<Point> polygon;
  std::vector<Point> seeds;
};

std::vector<Point> bounding(const std::vector<Point>& poly) {
  Point lo = poly[0], hi = poly[0];
  for (const Point& p : poly) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

Point sample_in(const std::vector<Point>& poly, UniformSource& uniform) {
  const auto box = bounding(poly);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Point p(box[0].x() + uniform() * (box[1].x() - box[0].x()),
                  box[0].y() + uniform() * (box[1].y() - box[0].y()));
    if (contains(poly, p)) return p;
  }
  throw GeometryError("could not sample a seed inside the domain");
}

std::vector<Point> voronoi_cell(const std::vector<Point>& piece, const std::vector<Point>& seeds,
                                std::size_t i) {
  std::vector<Point> cell = piece;
  for (std::size_t j = 0; j < seeds.size() && !cell.empty(); ++j) {
    if (j == i) continue;
    const Point normal = seeds[j] - seeds[i];
    const double offset = normal.dot(0.5 * (seeds[i] + seeds[j]));
    cell = clip_half_plane(cell, normal, offset);
  }
  return cell;
}

void separate_coincident(Piece& piece, double diam, UniformSource& uniform) {
  for (int attempt = 0;; ++attempt) {
    bool clash = false;
    for (std::size_t i = 0; i < piece.seeds.size(); ++i) {
      for (std::size_t j = i + 1; j < piece.seeds.size(); ++j) {
        if ((piece.seeds[i] - piece.seeds[j]).norm() > 1e-12 * diam) continue;
        clash = true;
        const Point jitter(uniform() - 0.5, uniform() - 0.5);
        const Point moved = piece.seeds[j] + 1e-6 * diam * jitter;
        if (contains(piece.polygon, moved)) piece.seeds[j] = moved;
      }
    }
    if (!clash) return;
    if (attempt == 100) throw GeometryError("coincident Voronoi seeds could not be separated");
  }
}

std::vector<std::vector<Point>> lloyd(Piece& piece, int iterations, double diam,
                                      UniformSource& uniform) {
  std::vector<std::vector<Point>> cells(piece.seeds.size());
  for (int it = 0;; ++it) {
    separate_coincident(piece, diam, uniform);
    for (std::size_t i = 0; i < piece.seeds.size(); ++i) {
      cells[i] = voronoi_cell(piece.polygon, piece.seeds, i);
      if (cells[i].size() < 3 || signed_area(cells[i]) <= 0.0) {
        throw GeometryError("degenerate Voronoi cell");
      }
    }
    if (it == iterations) break;
    for (std::size_t i = 0; i < piece.seeds.size(); ++i) piece.seeds[i] = area_centroid(cells[i]);
  }
  return cells;
}

// Merge near-coincident points and make the cells conforming by splicing in
// any vertex lying inside another cell's edge.
PolyMesh assemble_cells(const std::vector<std::vector<Point>>& cells, double tol) {
  std::vector<Point> vertices;
  std::vector<std::vector<Index>> elements;
  auto find_or_add = [&](const Point& p) {
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if ((vertices[v] - p).norm() <= tol) return static_cast<Index>(v);
    }
    vertices.push_back(p);
    return static_cast<Index>(vertices.size() - 1);
  };
  for (const auto& cell : cells) {
    std::vector<Index> ids;
    for (const Point& p : cell) {
      const Index v = find_or_add(p);
      if (ids.empty() || ids.back() != v) ids.push_back(v);
    }
    while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
    elements.push_back(std::move(ids));
  }
  for (auto& cycle : elements) {
    std::vector<Index> expanded;
    const std::size_t n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Index a = cycle[i];
      const Index b = cycle[(i + 1) % n];
      expanded.push_back(a);
      const Point& pa = vertices[a];
      const Point dir = vertices[b] - pa;
      std::vector<std::pair<double, Index>> inside;
      for (std::size_t v = 0; v < vertices.size(); ++v) {
        const auto id = static_cast<Index>(v);
        if (id == a || id == b) continue;
        if (point_segment_distance(vertices[v], pa, vertices[b]) > tol) continue;
        inside.emplace_back((vertices[v] - pa).dot(dir), id);
      }
      std::sort(inside.begin(), inside.end());
      for (const auto& [t, id] : inside) expanded.push_back(id);
    }
    cycle = std::move(expanded);
  }
  return PolyMesh(std::move(vertices), std::move(elements));
}

}  // namespace

PolyMesh build_voronoi_mesh(int n_seeds, const Domain& domain, int lloyd_iters,
                            std::uint64_t rng_seed) {
  if (n_seeds < 1) throw GeometryError("Voronoi mesh needs at least one seed");
  if (lloyd_iters < 0) throw GeometryError("negative Lloyd iteration count");
  if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin)) {
    throw GeometryError("domain has zero size");
  }
  const auto outline = domain.boundary();
  const double diam = std::hypot(domain.xmax - domain.xmin, domain.ymax - domain.ymin);

  if (n_seeds == 1) {
    std::vector<Index> cycle(outline.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) cycle[i] = static_cast<Index>(i);
    return PolyMesh(outline, {cycle});
  }

  std::vector<Piece> pieces;
  if (domain.kind == Domain::Kind::rectangle) {
    pieces.push_back({outline, {}});
  } else {
    const double xm = 0.5 * (domain.xmin + domain.xmax);
    const double ym = 0.5 * (domain.ymin + domain.ymax);
    const Point top_left(domain.xmin, domain.ymax);
    pieces.push_back({{Point(domain.xmin, domain.ymin), Point(xm, domain.ymin), Point(xm, ym),
                       top_left},
                      {}});
    pieces.push_back({{Point(xm, ym), Point(domain.xmax, ym), Point(domain.xmax, domain.ymax),
                       top_left},
                      {}});
  }

  std::vector<int> counts(pieces.size(), n_seeds);
  if (pieces.size() == 2) {
    const double share = signed_area(pieces[0].polygon) / domain.area();
    counts[0] = std::clamp(static_cast<int>(std::floor(n_seeds * share)), 1, n_seeds - 1);
    counts[1] = n_seeds - counts[0];
  }

  UniformSource uniform(rng_seed);
  std::vector<std::vector<Point>> cells;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (int s = 0; s < counts[k]; ++s) pieces[k].seeds.push_back(sample_in(pieces[k].polygon, uniform));
  }
  for (auto& piece : pieces) {
    auto piece_cells = lloyd(piece, lloyd_iters, diam, uniform);
    cells.insert(cells.end(), piece_cells.begin(), piece_cells.end());
  }
  return assemble_cells(cells, 1e-10 * diam);
}

}  // namespace quasivem
