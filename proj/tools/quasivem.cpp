// Command line front end: run experiments, generate meshes, self-check.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quasivem/error.hpp"
#include "quasivem/experiment.hpp"
#include "quasivem/mesh_io.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

int run(const std::string& config_path) {
  const auto config = quasivem::load_config(config_path);
  const auto result = quasivem::run_problem(config, &std::cerr);
  std::cout << result.csv.string() << '\n';
  if (!result.history.failure.empty()) {
    std::cerr << "error: " << result.history.failure << '\n';
    return kSolverError;
  }
  return 0;
}

int mesh(const std::string& kind, int cells, std::uint64_t seed, int lloyd, bool lshape,
         const std::string& out) {
  const auto domain = lshape ? quasivem::Domain::l_shape() : quasivem::Domain::unit_square();
  quasivem::PolyMesh m;
  if (quasivem::parse_grid_kind(kind) == quasivem::GridKind::voronoi) {
    m = quasivem::build_voronoi_mesh(cells, domain, lloyd, seed);
  } else {
    m = quasivem::build_cartesian_grid(cells, cells, domain);
  }
  if (out.empty()) {
    quasivem::write_mesh(std::cout, m);
  } else {
    quasivem::write_mesh(out, m);
  }
  return 0;
}

int check() {
  bool ok = true;
  for (const auto& r : quasivem::run_self_checks()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive virtual elements for quasilinear elliptic problems"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run an adaptive experiment");
  run_cmd->add_option("--config", config_path, "key = value configuration file")->required();

  std::string kind = "voronoi";
  int cells = 16;
  std::uint64_t seed = 42;
  int lloyd = 100;
  bool lshape = false;
  std::string out;
  auto* mesh_cmd = app.add_subcommand("mesh", "write a mesh in the plain-text format");
  mesh_cmd->add_option("--kind", kind, "voronoi or quads")->check(CLI::IsMember({"voronoi", "quads"}));
  mesh_cmd->add_option("--cells", cells, "Voronoi cells, or cells per side for quads")
      ->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--seed", seed, "random seed");
  mesh_cmd->add_option("--lloyd", lloyd, "Lloyd iterations")->check(CLI::NonNegativeNumber);
  mesh_cmd->add_flag("--lshape", lshape, "use the L-shaped domain");
  mesh_cmd->add_option("--out", out, "output path (stdout if omitted)");

  auto* check_cmd = app.add_subcommand("check", "run the built-in self checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) return run(config_path);
    if (*mesh_cmd) return mesh(kind, cells, seed, lloyd, lshape, out);
    if (*check_cmd) return check();
  } catch (const quasivem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const quasivem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return 0;
}
