#include "quasivem/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "quasivem/error.hpp"

namespace quasivem {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void expect_token(std::istream& in, const std::string& token) {
  std::string word;
  if (!(in >> word) || word != token) {
    throw ConfigError("mesh file: expected '" + token + "', found '" + word + "'");
  }
}

}  // namespace

void write_mesh(std::ostream& out, const PolyMesh& mesh) {
  out << "polymesh 2d\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const Point& p : mesh.vertices()) {
    out << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
  }
  out << "elements " << mesh.num_elements() << '\n';
  for (const auto& cycle : mesh.elements()) {
    out << cycle.size();
    for (Index v : cycle) out << ' ' << v;
    out << '\n';
  }
}

PolyMesh read_mesh(std::istream& in) {
  expect_token(in, "polymesh");
  expect_token(in, "2d");
  expect_token(in, "vertices");
  std::size_t nv = 0;
  if (!(in >> nv)) throw ConfigError("mesh file: bad vertex count");
  std::vector<Point> vertices(nv);
  for (auto& p : vertices) {
    if (!(in >> p.x() >> p.y())) throw ConfigError("mesh file: truncated vertex list");
  }
  expect_token(in, "elements");
  std::size_t ne = 0;
  if (!(in >> ne)) throw ConfigError("mesh file: bad element count");
  std::vector<std::vector<Index>> elements(ne);
  for (auto& cycle : elements) {
    std::size_t k = 0;
    if (!(in >> k)) throw ConfigError("mesh file: truncated element list");
    cycle.resize(k);
    for (auto& v : cycle) {
      if (!(in >> v)) throw ConfigError("mesh file: truncated element list");
    }
  }
  return PolyMesh(std::move(vertices), std::move(elements));
}

void write_mesh(const std::filesystem::path& path, const PolyMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
}

PolyMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file " + path.string());
  return read_mesh(in);
}

void write_mesh_svg(std::ostream& out, const PolyMesh& mesh) {
  const auto box = mesh.bounding_box();
  const double width = box[2] - box[0];
  const double height = box[3] - box[1];
  const double stroke = 1e-3 * std::max(width, height);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(box[0]) << ' '
      << format_double(-box[3]) << ' ' << format_double(width) << ' ' << format_double(height)
      << "\">\n";
  // y is flipped so the picture has the usual orientation.
  out << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << format_double(stroke) << "\">\n";
  for (const auto& cycle : mesh.elements()) {
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Point& p = mesh.vertex(cycle[i]);
      if (i) out << ' ';
      out << format_double(p.x()) << ',' << format_double(-p.y());
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_mesh_svg(const std::filesystem::path& path, const PolyMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_mesh_svg(out, mesh);
}

}  // namespace quasivem
