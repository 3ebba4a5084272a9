#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "helpers.hpp"
#include "quasivem/error.hpp"
#include "quasivem/problems.hpp"
#include "quasivem/space.hpp"

using namespace quasivem;
using namespace testing_helpers;
using std::numbers::pi;

namespace {

// A regular pentagon, Voronoi cells, and an element with a hanging vertex.
std::vector<PolyMesh> sample_meshes() {
  std::vector<PolyMesh> out;
  out.push_back(pentagon());
  out.push_back(build_voronoi_mesh(6, Domain::unit_square(), 10, 11));
  out.push_back(refine(two_squares(), std::vector<Index>{0}));
  return out;
}

std::vector<Point> probe_points(const PolyMesh& mesh, Index e) {
  std::vector<Point> pts = mesh.element_polygon(e);
  const Point c = mesh.barycenter(e);
  for (std::size_t i = 0, n = pts.size(); i < n; ++i) pts.push_back(0.5 * (pts[i] + c));
  pts.push_back(c);
  return pts;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 2 * uniform01(rng) - 1;
  return v;
}

bool edge_forward(const PolyMesh& mesh, Index e, std::size_t i) {
  const auto c = mesh.element(e);
  return c[i] < c[(i + 1) % c.size()];
}

}  // namespace

TEST(DofMap, CountsAndLayout) {
  const PolyMesh grid = build_cartesian_grid(3, 3);
  for (int order = 1; order <= 3; ++order) {
    const DofMap dofs(grid, order);
    EXPECT_EQ(dofs.size(), 16u + 24u * (order - 1) + 9u * order * (order - 1) / 2);
    EXPECT_EQ(dofs.num_boundary(), 12u + 12u * (order - 1));
    for (std::size_t e = 0; e < 9; ++e) {
      EXPECT_EQ(dofs.element_dofs(static_cast<Index>(e)).size(),
                4u + 4u * (order - 1) + order * (order - 1) / 2u);
    }
  }
}

TEST(DofMap, SharedEdgeHasIdenticalIds) {
  const PolyMesh m = two_squares();
  const DofMap dofs(m, 3);
  const auto a = dofs.element_dofs(0);
  const auto b = dofs.element_dofs(1);
  // Local edge 1 of the left square and local edge 3 of the right one.
  EXPECT_EQ(a[4 + 1 * 2], b[4 + 3 * 2]);
  EXPECT_EQ(a[4 + 1 * 2 + 1], b[4 + 3 * 2 + 1]);
  EXPECT_EQ(a[1], b[0]);
  EXPECT_EQ(a[2], b[3]);
  int boundary = 0;
  for (std::size_t i = 0; i < dofs.size(); ++i) boundary += dofs.is_boundary(static_cast<Index>(i));
  EXPECT_EQ(boundary, 6 + 6 * 2);
}

TEST(ElementOperators, PolynomialReproduction) {
  for (const PolyMesh& mesh : sample_meshes()) {
    for (int order = 1; order <= 3; ++order) {
      for (int k = 1; k <= order; ++k) {
        const TestPolynomial p{k};
        for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
          const auto id = static_cast<Index>(e);
          const ElementOperators ops = build_element_operators(mesh, id, order);
          const Eigen::VectorXd d = local_dofs(mesh, id, order, p);
          const Polynomial pi0(ops.basis, ops.value_projection * d);
          const MonomialBasis gb = ops.gradient_basis();
          const VectorPolynomial g{{gb, ops.grad_x * d}, {gb, ops.grad_y * d}};
          for (const Point& x : probe_points(mesh, id)) {
            EXPECT_NEAR(pi0(x), p(x), 1e-10);
            EXPECT_NEAR((g(x) - p.gradient(x)).norm(), 0.0, 1e-10);
          }
          const auto poly = mesh.element_polygon(id);
          for (std::size_t i = 0; i < poly.size(); ++i) {
            for (double t : {0.0, 0.3, 0.8, 1.0}) {
              const Point x = poly[i] + t * (poly[(i + 1) % poly.size()] - poly[i]);
              EXPECT_NEAR(trace_value(ops, i, d, t), p(x), 1e-10);
            }
          }
        }
      }
    }
  }
}

TEST(ElementOperators, ConstantAndBilinearProjections) {
  const PolyMesh sq = unit_square();
  const ElementOperators ops1 = build_element_operators(sq, 0, 1);
  const Eigen::VectorXd ones = local_dofs(sq, 0, 1, [](const Point&) { return 1.0; });
  const Eigen::VectorXd c = ops1.value_projection * ones;
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_NEAR(c.tail(2).norm(), 0.0, 1e-14);
  EXPECT_NEAR((ops1.grad_x * ones).norm() + (ops1.grad_y * ones).norm(), 0.0, 1e-14);

  const ElementOperators ops2 = build_element_operators(sq, 0, 2);
  auto xy = [](const Point& p) { return p.x() * p.y(); };
  const Polynomial p(ops2.basis, ops2.value_projection * local_dofs(sq, 0, 2, xy));
  for (const Point& x : probe_points(sq, 0)) EXPECT_NEAR(p(x), xy(x), 1e-12);
}

TEST(ElementOperators, GradientExamples) {
  const PolyMesh pent = pentagon();
  for (int order = 1; order <= 3; ++order) {
    const ElementOperators ops = build_element_operators(pent, 0, order);
    const Eigen::VectorXd d = local_dofs(pent, 0, order, [](const Point& p) { return p.x() + 2 * p.y(); });
    const Eigen::VectorXd gx = ops.grad_x * d;
    const Eigen::VectorXd gy = ops.grad_y * d;
    EXPECT_NEAR(gx[0], 1.0, 1e-12);
    EXPECT_NEAR(gy[0], 2.0, 1e-12);
    EXPECT_NEAR(gx.tail(gx.size() - 1).norm() + gy.tail(gy.size() - 1).norm(), 0.0, 1e-11);
    const Point g0 = ops.grad_const * d;
    EXPECT_NEAR((g0 - Point(1, 2)).norm(), 0.0, 1e-12);
  }
  const ElementOperators ops3 = build_element_operators(pent, 0, 3);
  const Eigen::VectorXd d = local_dofs(pent, 0, 3, [](const Point& p) { return p.x() * p.x() * p.y(); });
  const MonomialBasis gb = ops3.gradient_basis();
  const VectorPolynomial g{{gb, ops3.grad_x * d}, {gb, ops3.grad_y * d}};
  for (const Point& x : probe_points(pent, 0)) {
    EXPECT_NEAR(g(x).x(), 2 * x.x() * x.y(), 1e-10);
    EXPECT_NEAR(g(x).y(), x.x() * x.x(), 1e-10);
  }
}

TEST(ElementOperators, EdgeTraceExamples) {
  const PolyMesh sq = unit_square();
  const ElementOperators ops1 = build_element_operators(sq, 0, 1);
  Eigen::VectorXd d(4);
  d << 0, 1, 0, 0;
  for (double t : {0.0, 0.25, 0.5, 1.0}) EXPECT_NEAR(trace_value(ops1, 0, d, t), t, 1e-15);

  const ElementOperators ops2 = build_element_operators(sq, 0, 2);
  const Eigen::VectorXd dx2 = local_dofs(sq, 0, 2, [](const Point& p) { return p.x() * p.x(); });
  for (double t : {0.0, 0.25, 0.5, 1.0}) EXPECT_NEAR(trace_value(ops2, 0, dx2, t), t * t, 1e-14);
}

TEST(ElementOperators, EdgeTraceMatchesInterpolationOracle) {
  // Oracle: the trace in powers of t from endpoint values and the two scaled
  // moments against xi_g^j, xi_g = +-(2t - 1), with exact moment integrals.
  const PolyMesh pent = pentagon();
  const int order = 3;
  const ElementOperators ops = build_element_operators(pent, 0, order);
  const Eigen::VectorXd d = random_vector(ops.num_dofs, 7);
  const int n = ops.num_vertices;
  for (int i = 0; i < n; ++i) {
    const double sign = edge_forward(pent, 0, static_cast<std::size_t>(i)) ? 1.0 : -1.0;
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    Eigen::Vector4d b;
    for (int k = 0; k <= 3; ++k) {
      a(0, k) = k == 0 ? 1.0 : 0.0;
      a(1, k) = 1.0;
      a(2, k) = 1.0 / (k + 1);                                    // int t^k
      a(3, k) = sign * (2.0 / (k + 2) - 1.0 / (k + 1));           // int t^k (2t - 1)
    }
    b << d[i], d[(i + 1) % n], d[n + 2 * i], d[n + 2 * i + 1];
    const Eigen::Vector4d c = a.fullPivLu().solve(b);
    for (double t : {0.0, 0.2, 0.55, 0.9, 1.0}) {
      const double expected = c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
      EXPECT_NEAR(trace_value(ops, static_cast<std::size_t>(i), d, t), expected, 1e-10);
    }
  }
}

TEST(ElementOperators, ValueProjectionMatchesKktOracle) {
  const PolyMesh pent = pentagon();
  const int order = 2;
  const ElementOperators ops = build_element_operators(pent, 0, order);
  const int np = poly_dim(order);
  const int ni = poly_dim(order - 2);
  const int nd = ops.num_dofs;
  // Dofs of each monomial computed by the function interpolation path.
  Eigen::MatrixXd dmat(nd, np);
  for (int a = 0; a < np; ++a) {
    dmat.col(a) = local_dofs(pent, 0, order, [&](const Point& x) { return ops.basis.evaluate(x)[a]; }, 12);
  }
  const QuadratureRule rule = element_rule(pent, 0, 12);
  Eigen::MatrixXd cmat = Eigen::MatrixXd::Zero(ni, np);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd v = ops.basis.evaluate(rule.points[q]);
    cmat += rule.weights[q] * v.head(ni) * v.transpose() / pent.area(0);
  }
  const Eigen::VectorXd d = random_vector(nd, 21);
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(np + ni, np + ni);
  kkt.topLeftCorner(np, np) = dmat.transpose() * dmat;
  kkt.topRightCorner(np, ni) = cmat.transpose();
  kkt.bottomLeftCorner(ni, np) = cmat;
  Eigen::VectorXd rhs(np + ni);
  rhs << dmat.transpose() * d, d.tail(ni);
  const Eigen::VectorXd oracle = kkt.colPivHouseholderQr().solve(rhs).head(np);
  EXPECT_LE((ops.value_projection * d - oracle).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(ElementOperators, MomentConsistencyForArbitraryDofs) {
  for (const PolyMesh& mesh : sample_meshes()) {
    for (int order = 2; order <= 3; ++order) {
      const ElementOperators ops = build_element_operators(mesh, 0, order);
      const int ni = poly_dim(order - 2);
      const Eigen::VectorXd d = random_vector(ops.num_dofs, 5 + order);
      const Eigen::VectorXd p = ops.value_projection * d;
      const Eigen::VectorXd moments = ops.mass.topRows(ni) * p / ops.area;
      EXPECT_LE((moments - d.tail(ni)).lpNorm<Eigen::Infinity>(), 1e-11);

      const Eigen::VectorXd full = ops.full_moments * d;
      EXPECT_LE((full.head(ni) - ops.area * d.tail(ni)).lpNorm<Eigen::Infinity>(), 1e-12);
      const QuadratureRule rule = element_rule(mesh, 0, 2 * order + 2);
      const Polynomial pp(ops.basis, p);
      for (int a = ni; a < ops.basis.size(); ++a) {
        const double direct = rule.integrate([&](const Point& x) { return pp(x) * ops.basis.evaluate(x)[a]; });
        EXPECT_NEAR(full[a], direct, 1e-12);
      }
    }
  }
}

TEST(ElementOperators, FullMomentsOfPolynomial) {
  const PolyMesh pent = pentagon();
  const ElementOperators ops = build_element_operators(pent, 0, 3);
  const TestPolynomial p{3};
  const Eigen::VectorXd full = ops.full_moments * local_dofs(pent, 0, 3, p);
  const QuadratureRule rule = element_rule(pent, 0, 10);
  for (int a = 0; a < ops.basis.size(); ++a) {
    EXPECT_NEAR(full[a], rule.integrate([&](const Point& x) { return p(x) * ops.basis.evaluate(x)[a]; }), 1e-12);
  }
}

TEST(Stabilization, KernelIsExactlyPolynomials) {
  for (const PolyMesh& mesh : sample_meshes()) {
    for (int order = 1; order <= 3; ++order) {
      const ElementOperators ops = build_element_operators(mesh, 0, order);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(ops.stab_base);
      lu.setThreshold(1e-10);
      EXPECT_EQ(lu.rank(), ops.num_dofs - poly_dim(order));
      const Eigen::VectorXd d = local_dofs(mesh, 0, order, TestPolynomial{order});
      EXPECT_LE((stabilization_matrix(ops, 2.5) * d).norm(), 1e-11);
      EXPECT_LE((ops.stab_base - ops.stab_base.transpose()).norm(), 1e-14 * ops.stab_base.norm());
    }
  }
}

TEST(Stabilization, ScaleModes) {
  const PolyMesh sq = unit_square();
  const ElementOperators ops = build_element_operators(sq, 0, 1);
  const NonlinearModel unit = linear_model(1.0, [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; });
  EXPECT_NEAR(stabilization_scale(ops, unit, Point(0.3, 0.1), StabilizationMode::element_average), 1.0, 1e-15);
  const NonlinearModel p1 = make_problem(1).model;
  EXPECT_NEAR(stabilization_scale(ops, p1, Point(0, 0), StabilizationMode::element_average), 3.0, 1e-14);
  EXPECT_NEAR(stabilization_scale(ops, p1, Point(1, 0), StabilizationMode::element_average), 2.5, 1e-14);
  EXPECT_NEAR(stabilization_scale(ops, p1, Point(1, 0), StabilizationMode::linear), 3.0 * 1.875, 1e-14);
  NonlinearModel bad = unit;
  bad.mu = [](const Point&, double) { return -1.0; };
  EXPECT_THROW((void)stabilization_scale(ops, bad, Point(0, 0), StabilizationMode::element_average), ModelError);
}

TEST(Interpolate, ReproducesGlobalPolynomial) {
  const PolyMesh mesh = build_voronoi_mesh(12, Domain::unit_square(), 20, 3);
  for (int order = 1; order <= 3; ++order) {
    const VemSpace space(mesh, order);
    const TestPolynomial p{order};
    const Eigen::VectorXd w = interpolate(p, space);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const auto id = static_cast<Index>(e);
      const Polynomial pi0 = space.value_projection(id, w);
      const VectorPolynomial g = space.gradient_projection(id, w);
      for (const Point& x : probe_points(mesh, id)) {
        EXPECT_NEAR(pi0(x), p(x), 1e-10);
        EXPECT_NEAR((g(x) - p.gradient(x)).norm(), 0.0, 1e-9);
      }
      // Global and local interpolation agree.
      EXPECT_LE((space.local(w, id) - local_dofs(mesh, id, order, p)).norm(), 1e-12);
    }
    EXPECT_EQ(interpolate([](const Point&) { return 0.0; }, space).norm(), 0.0);
  }
}

TEST(Interpolate, GradientErrorConvergesAtOrderTwo) {
  auto w = [](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); };
  auto grad = [](const Point& p) {
    return Point(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                 pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
  };
  PolyMesh mesh = build_cartesian_grid(4, 4);
  std::vector<double> hs, errs;
  for (int level = 0; level <= 3; ++level) {
    const VemSpace space(mesh, 2);
    const Eigen::VectorXd wi = interpolate(w, space);
    double err = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const auto id = static_cast<Index>(e);
      const VectorPolynomial g = space.gradient_projection(id, wi);
      err += element_rule(mesh, id, 8).integrate([&](const Point& x) { return (grad(x) - g(x)).squaredNorm(); });
    }
    hs.push_back(mesh.mesh_size());
    errs.push_back(std::sqrt(err));
    mesh = refine_uniform(mesh);
  }
  EXPECT_NEAR(log_slope(hs, errs), 2.0, 0.2);
}
