#include "quasivem/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "quasivem/error.hpp"
#include "quasivem/mesh_io.hpp"

namespace quasivem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid value '" + value + "' for key '" + key + "' (expected true/false)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (problem < 1 || problem > 3) throw ConfigError("problem must be 1, 2 or 3");
  if (order < 1 || order > 3) throw ConfigError("order must be 1, 2 or 3");
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
  if (refinements < 0) throw ConfigError("refinements must be nonnegative");
  if (lloyd_iters < 0) throw ConfigError("lloyd_iters must be nonnegative");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (output.empty()) throw ConfigError("output directory is empty");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int number = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
    if (key == "problem") {
      c.problem = parse_number<int>(key, value);
    } else if (key == "grid") {
      c.grid = parse_grid_kind(value);
    } else if (key == "order") {
      c.order = parse_number<int>(key, value);
    } else if (key == "theta") {
      c.theta = parse_number<double>(key, value);
    } else if (key == "refinements") {
      c.refinements = parse_number<int>(key, value);
    } else if (key == "dof_budget") {
      c.dof_budget = parse_number<std::size_t>(key, value);
    } else if (key == "uniform") {
      c.uniform = parse_bool(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "lloyd_iters") {
      c.lloyd_iters = parse_number<int>(key, value);
    } else if (key == "tol") {
      c.tol = parse_number<double>(key, value);
    } else if (key == "max_iter") {
      c.max_iter = parse_number<int>(key, value);
    } else if (key == "output") {
      c.output = value;
    } else {
      throw ConfigError("unknown key '" + key + "' on line " + std::to_string(number));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  char tol[32];
  std::snprintf(tol, sizeof tol, "%.17g", c.tol);
  char theta[32];
  std::snprintf(theta, sizeof theta, "%.17g", c.theta);
  out << "problem = " << c.problem << '\n'
      << "grid = " << to_string(c.grid) << '\n'
      << "order = " << c.order << '\n'
      << "theta = " << theta << '\n'
      << "refinements = " << c.refinements << '\n'
      << "dof_budget = " << c.dof_budget << '\n'
      << "uniform = " << (c.uniform ? "true" : "false") << '\n'
      << "seed = " << c.seed << '\n'
      << "lloyd_iters = " << c.lloyd_iters << '\n'
      << "tol = " << tol << '\n'
      << "max_iter = " << c.max_iter << '\n'
      << "output = " << c.output.string() << '\n';
}

void write_csv(std::ostream& out, const AdaptHistory& history) {
  out << "level,dofs,H1 error,Estimated error,Effectivity\n";
  for (const AdaptStep& s : history.steps) {
    out << s.level << ',' << s.dofs << ',' << format_number(s.error) << ','
        << format_number(s.estimated) << ',' << format_number(s.effectivity) << '\n';
  }
}

RunResult run_problem(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec || !std::filesystem::is_directory(config.output)) {
    throw ConfigError("cannot create output directory " + config.output.string());
  }
  const Problem problem = make_problem(config.problem);
  const PolyMesh mesh = initial_mesh(problem, config.grid, config.seed, config.lloyd_iters);

  AdaptConfig adapt;
  adapt.theta = config.theta;
  adapt.max_refinements = config.refinements;
  adapt.dof_budget = config.dof_budget;
  adapt.order = config.order;
  adapt.uniform = config.uniform;
  adapt.solver.tol = config.tol;
  adapt.solver.max_iter = config.max_iter;

  RunResult result;
  result.history = adapt_loop(problem.model, mesh, adapt, [&](const AdaptStep& s) {
    if (log) {
      *log << "level " << s.level << ": dofs " << s.dofs << ", error " << format_number(s.error)
           << ", estimate " << format_number(s.estimated) << ", kacanov steps "
           << s.increments.size() << '\n';
    }
  });

  {
    std::ofstream cfg(config.output / "config.txt");
    write_config(cfg, config);
  }
  result.csv = config.output / "results.csv";
  {
    std::ofstream csv(result.csv);
    if (!csv) throw ConfigError("cannot write " + result.csv.string());
    write_csv(csv, result.history);
  }
  const auto& steps = result.history.steps;
  if (!steps.empty()) {
    const std::set<std::size_t> levels{0, (steps.size() - 1) / 2, steps.size() - 1};
    for (std::size_t k : levels) {
      write_mesh_svg(config.output / ("mesh_level_" + std::to_string(steps[k].level) + ".svg"),
                     steps[k].mesh);
    }
  }
  return result;
}

std::vector<CheckResult> run_self_checks() {
  std::vector<CheckResult> out;
  auto record = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  // Polynomial patch test on a Voronoi mesh of the L-shape.
  {
    const PolyMesh mesh = build_voronoi_mesh(21, Domain::l_shape(), 20, 7);
    for (int order = 1; order <= 3; ++order) {
      // A polynomial of exact degree `order`.
      auto u = [order](const Point& p) { return std::pow(p.x() + 0.5 * p.y(), order) + p.y(); };
      auto grad = [order](const Point& p) {
        const double d = order * std::pow(p.x() + 0.5 * p.y(), order - 1);
        return Point(d, 0.5 * d + 1.0);
      };
      const double lap = order >= 2 ? order * (order - 1) * 1.25 : 0.0;
      NonlinearModel model = linear_model(
          1.0,
          [order, lap](const Point& p) {
            return order >= 2 ? -lap * std::pow(p.x() + 0.5 * p.y(), order - 2) : 0.0;
          },
          u);
      model.exact = u;
      model.exact_gradient = grad;
      const VemSpace space(mesh, order);
      const NonlinearResult sol = solve_nonlinear(space, model);
      double err = 0.0;
      for (double v : gradient_errors(space, model, sol.u)) err += v;
      err = std::sqrt(err);
      const double est = estimate(space, model, sol.u).total;
      record("patch test order " + std::to_string(order), err <= 1e-8 && est <= 1e-7,
             "error " + format_number(err) + ", estimate " + format_number(est));
    }
  }

  // Manufactured right-hand sides against finite differences of the flux.
  for (int id = 1; id <= 3; ++id) {
    const Problem problem = make_problem(id);
    const NonlinearModel& m = problem.model;
    std::mt19937_64 rng(100 + id);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double step = 1e-5;
    double worst = 0.0;
    int samples = 0;
    while (samples < 100) {
      const Domain& d = problem.domain;
      const Point p(d.xmin + (d.xmax - d.xmin) * uniform(), d.ymin + (d.ymax - d.ymin) * uniform());
      if (!d.contains(p) || p.norm() < 0.05) continue;
      auto flux = [&](const Point& x) {
        const Point g = m.exact_gradient(x);
        return Point(m.mu(x, g.norm()) * g);
      };
      const double div = (flux(p + Point(step, 0)).x() - flux(p - Point(step, 0)).x() +
                          flux(p + Point(0, step)).y() - flux(p - Point(0, step)).y()) /
                         (2 * step);
      const double scale = std::max(1.0, std::abs(m.f(p)));
      worst = std::max(worst, std::abs(-div - m.f(p)) / scale);
      ++samples;
    }
    record("manufactured data problem " + std::to_string(id), worst <= 1e-5,
           "max relative defect " + format_number(worst));
  }

  // Marking of equal indicators.
  {
    const std::vector<double> equal(100, 1.0);
    const auto marked = dorfler_mark(equal, 0.4).marked.size();
    record("dorfler equal indicators", marked == 16, std::to_string(marked) + " of 100 marked");
  }

  // Refinement keeps the area and produces the expected element count.
  {
    const PolyMesh grid = build_cartesian_grid(4, 4, Domain::l_shape());
    const std::vector<Index> marked{0, 5};
    const PolyMesh fine = refine(grid, marked);
    const bool ok =
        fine.num_elements() == grid.num_elements() + 6 && std::abs(fine.total_area() - 3.0) < 1e-12;
    record("refinement bookkeeping", ok,
           std::to_string(fine.num_elements()) + " elements, area " +
               format_number(fine.total_area()));
  }
  return out;
}

}  // namespace quasivem
