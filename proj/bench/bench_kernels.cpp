// Serial reference against OpenMP kernels. Arg(0) is serial, Arg(1) parallel.

#include <benchmark/benchmark.h>

#include "minkval/geomcore.hpp"
#include "minkval/kernels.hpp"
#include "minkval/operators.hpp"

using namespace minkval;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) == 0 ? "serial" : "parallel"); }

void BM_SupportTable(benchmark::State& s) {
  const Polytope p = random_polytope(1, 4, 40);
  const DirectionGrid g = sphere_grid(4, 12);
  for (auto _ : s) benchmark::DoNotOptimize(support_table(p.vertices(), g.directions, exec_of(s)));
  label(s);
}

void BM_SteinerGridSum(benchmark::State& s) {
  const Polytope p = random_polytope(2, 3, 30);
  const DirectionGrid g = sphere_grid(3, 60);
  const std::vector<double> h = support_table(p.vertices(), g.directions, Exec::serial);
  for (auto _ : s) benchmark::DoNotOptimize(steiner_grid_sum(g.directions, g.weights, h, exec_of(s)));
  label(s);
}

void BM_HalfspaceVertices(benchmark::State& s) {
  const DirectionGrid g = sphere_grid(3, 4);
  std::vector<double> h(g.size(), 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(halfspace_vertices(g.directions, h, 1e-9, exec_of(s)));
  label(s);
}

void BM_ProjectionOnGrid(benchmark::State& s) {
  const Polytope p = random_polytope(3, 4, 12);
  const SupportFunction h = projection_operator().apply(p);
  const DirectionGrid g = sphere_grid(4, 8);
  for (auto _ : s) benchmark::DoNotOptimize(evaluate_on_grid(h, g.directions, exec_of(s)));
  label(s);
}

}  // namespace

BENCHMARK(BM_SupportTable)->Arg(0)->Arg(1);
BENCHMARK(BM_SteinerGridSum)->Arg(0)->Arg(1);
BENCHMARK(BM_HalfspaceVertices)->Arg(0)->Arg(1);
BENCHMARK(BM_ProjectionOnGrid)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
