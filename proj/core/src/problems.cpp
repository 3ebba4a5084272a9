#include "quasivem/problems.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "quasivem/error.hpp"

namespace quasivem {

namespace {

using std::numbers::pi;

// Value, gradient and Hessian of an exact solution at one point.
struct Jet {
  double u = 0.0;
  Point grad = Point::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

Jet sine_jet(const Point& p) {
  const double sx = std::sin(pi * p.x());
  const double sy = std::sin(pi * p.y());
  const double cx = std::cos(pi * p.x());
  const double cy = std::cos(pi * p.y());
  Jet j;
  j.u = sx * sy;
  j.grad = pi * Point(cx * sy, sx * cy);
  j.hess << -pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy;
  return j;
}

// r^{2/3} sin(2 phi / 3) with phi in [0, 2 pi), as the imaginary part of z^{2/3}.
Jet corner_jet(const Point& p) {
  Jet j;
  const double r = p.norm();
  if (r == 0.0) return j;
  double phi = std::atan2(p.y(), p.x());
  if (phi < 0.0) phi += 2.0 * pi;
  auto power = [&](double a) { return std::polar(std::pow(r, a), a * phi); };
  j.u = power(2.0 / 3.0).imag();
  const std::complex<double> d1 = (2.0 / 3.0) * power(-1.0 / 3.0);
  const std::complex<double> d2 = (-2.0 / 9.0) * power(-4.0 / 3.0);
  j.grad = Point(d1.imag(), d1.real());
  j.hess << d2.imag(), d2.real(), d2.real(), -d2.imag();
  return j;
}

Jet peak_jet(const Point& p) {
  const double a = 1000.0;
  const double dx = p.x() - 0.5;
  const double dy = p.y() - 0.5;
  const double g = std::exp(-a * (dx * dx + dy * dy));
  Jet j;
  j.u = g;
  j.grad = -2.0 * a * g * Point(dx, dy);
  j.hess << (4 * a * a * dx * dx - 2 * a) * g, 4 * a * a * dx * dy * g, 4 * a * a * dx * dy * g,
      (4 * a * a * dy * dy - 2 * a) * g;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) { return {a.u + b.u, a.grad + b.grad, a.hess + b.hess}; }

// f = -mu(t) lap u - (mu'(t)/t) grad u . H grad u with t = |grad u|.
template <class JetFn, class Mu, class MuPrimeOverT>
double forcing(const Point& p, JetFn jet, Mu mu, MuPrimeOverT mu_prime_over_t) {
  const Jet j = jet(p);
  const double t = j.grad.norm();
  return -mu(t) * j.hess.trace() - mu_prime_over_t(t) * j.grad.dot(j.hess * j.grad);
}

void attach_exact(NonlinearModel& model, Jet (*jet)(const Point&)) {
  model.exact = [jet](const Point& p) { return jet(p).u; };
  model.exact_gradient = [jet](const Point& p) { return jet(p).grad; };
  model.g = model.exact;
}

NonlinearModel problem1() {
  NonlinearModel m;
  m.name = "problem1";
  m.mu = [](const Point&, double t) { return 2.0 + 1.0 / (1.0 + t * t); };
  m.dmu_dt = [](const Point&, double t) { return -2.0 * t / ((1 + t * t) * (1 + t * t)); };
  // d(mu(t) t)/dt = 2 + (1 - t^2)/(1 + t^2)^2 lies in [2 - 1/8, 3].
  m.mu_min = 1.875;
  m.mu_max = 3.0;
  m.f = [](const Point& p) {
    return forcing(
        p, sine_jet, [](double t) { return 2.0 + 1.0 / (1.0 + t * t); },
        [](double t) { return -2.0 / ((1 + t * t) * (1 + t * t)); });
  };
  attach_exact(m, sine_jet);
  return m;
}

double mu2(double t) { return 1.0 + std::exp(-t * t); }
double mu2_prime_over_t(double t) { return -2.0 * std::exp(-t * t); }

NonlinearModel exp_model(std::string name) {
  NonlinearModel m;
  m.name = std::move(name);
  m.mu = [](const Point&, double t) { return mu2(t); };
  m.dmu_dt = [](const Point&, double t) { return t * mu2_prime_over_t(t); };
  // d(mu(t) t)/dt = 1 + (1 - 2 t^2) exp(-t^2), minimal at t^2 = 3/2.
  m.mu_min = 1.0 - 2.0 * std::exp(-1.5);
  m.mu_max = 2.0;
  return m;
}

NonlinearModel problem2() {
  NonlinearModel m = exp_model("problem2");
  m.f = [](const Point& p) {
    if (p.norm() == 0.0) return 0.0;
    return forcing(p, corner_jet, mu2, mu2_prime_over_t);
  };
  attach_exact(m, corner_jet);
  return m;
}

Jet corner_peak_jet(const Point& p) { return corner_jet(p) + peak_jet(p); }

NonlinearModel problem3() {
  NonlinearModel m = exp_model("problem3");
  m.f = [](const Point& p) {
    if (p.norm() == 0.0) return forcing(p, peak_jet, mu2, mu2_prime_over_t);
    return forcing(p, corner_peak_jet, mu2, mu2_prime_over_t);
  };
  attach_exact(m, corner_peak_jet);
  return m;
}

}  // namespace

GridKind parse_grid_kind(const std::string& name) {
  if (name == "quads") return GridKind::quads;
  if (name == "voronoi") return GridKind::voronoi;
  throw ConfigError("unknown grid kind '" + name + "' (expected quads or voronoi)");
}

std::string to_string(GridKind kind) { return kind == GridKind::quads ? "quads" : "voronoi"; }

Problem make_problem(int id) {
  switch (id) {
    case 1:
      return {1, problem1(), Domain::unit_square()};
    case 2:
      return {2, problem2(), Domain::l_shape()};
    case 3:
      return {3, problem3(), Domain::l_shape()};
    default:
      throw ConfigError("unknown problem id " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
}

PolyMesh initial_mesh(const Problem& problem, GridKind kind, std::uint64_t seed,
                      int lloyd_iters) {
  const bool square = problem.domain.kind == Domain::Kind::rectangle;
  if (kind == GridKind::quads) return build_cartesian_grid(4, 4, problem.domain);
  return build_voronoi_mesh(square ? 16 : 21, problem.domain, lloyd_iters, seed);
}

}  // namespace quasivem
