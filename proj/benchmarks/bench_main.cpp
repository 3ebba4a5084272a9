#include <benchmark/benchmark.h>

#include "quasivem/estimator.hpp"
#include "quasivem/problems.hpp"
#include "quasivem/solver.hpp"

using namespace quasivem;

namespace {

PolyMesh refined_square(int levels) {
  PolyMesh mesh = build_cartesian_grid(4, 4);
  for (int i = 0; i < levels; ++i) mesh = refine_uniform(mesh);
  return mesh;
}

void BM_VoronoiLloyd(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_voronoi_mesh(cells, Domain::l_shape(), 100, 42));
  }
}
BENCHMARK(BM_VoronoiLloyd)->Arg(21)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BuildSpace(benchmark::State& state) {
  const PolyMesh mesh = refined_square(3);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(VemSpace(mesh, order));
}
BENCHMARK(BM_BuildSpace)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const Problem p = make_problem(1);
  const VemSpace space(refined_square(3), static_cast<int>(state.range(0)));
  const Eigen::VectorXd z = interpolate(p.model.exact, space);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_linearized(space, p.model, z));
}
BENCHMARK(BM_Assemble)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_SolveNonlinear(benchmark::State& state) {
  const Problem p = make_problem(1);
  const VemSpace space(refined_square(3), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_nonlinear(space, p.model));
}
BENCHMARK(BM_SolveNonlinear)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const Problem p = make_problem(2);
  PolyMesh mesh = initial_mesh(p, GridKind::quads, 42);
  for (int i = 0; i < 3; ++i) mesh = refine_uniform(mesh);
  const VemSpace space(mesh, static_cast<int>(state.range(0)));
  const Eigen::VectorXd u = interpolate(p.model.exact, space);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(space, p.model, u));
}
BENCHMARK(BM_Estimate)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
