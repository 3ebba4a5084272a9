#pragma once

#include <filesystem>
#include <iosfwd>

#include "quasivem/mesh.hpp"

namespace quasivem {

/// Plain-text mesh format:
///
///     polymesh 2d
///     vertices N
///     x y            (N lines)
///     elements M
///     k i1 ... ik    (M lines, 0-based, counter-clockwise)
void write_mesh(std::ostream& out, const PolyMesh& mesh);
PolyMesh read_mesh(std::istream& in);

void write_mesh(const std::filesystem::path& path, const PolyMesh& mesh);
PolyMesh read_mesh(const std::filesystem::path& path);

/// One stroke-only polygon per element; the view box is the mesh bounding box.
void write_mesh_svg(std::ostream& out, const PolyMesh& mesh);
void write_mesh_svg(const std::filesystem::path& path, const PolyMesh& mesh);

}  // namespace quasivem
