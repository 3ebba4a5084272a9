#pragma once

#include <cstdint>
#include <string>

#include "quasivem/mesh.hpp"
#include "quasivem/model.hpp"

namespace quasivem {

enum class GridKind { quads, voronoi };

GridKind parse_grid_kind(const std::string& name);
std::string to_string(GridKind kind);

/// A built-in benchmark: coefficient, manufactured data and domain.
///
/// 1: mu = 2 + 1/(1+t^2), u = sin(pi x) sin(pi y) on the unit square.
/// 2: mu = 1 + exp(-t^2), u = r^{2/3} sin(2 phi/3) on the L-shape.
/// 3: as 2 plus the peak exp(-1000((x-1/2)^2 + (y-1/2)^2)).
struct Problem {
  int id = 1;
  NonlinearModel model;
  Domain domain;
};

/// Throws ConfigError for an unknown id.
Problem make_problem(int id);

/// Starting mesh: 4x4 squares on the unit square (12 on the L-shape), or a
/// Voronoi grid of 16 (21) cells.
PolyMesh initial_mesh(const Problem& problem, GridKind kind, std::uint64_t seed,
                      int lloyd_iters = 100);

}  // namespace quasivem
