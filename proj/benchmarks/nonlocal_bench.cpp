#include <benchmark/benchmark.h>

#include "perilimit/nonlocal.hpp"

using namespace perilimit;

static void BM_NonlocalEnergy2d(benchmark::State& state) {
  const double delta = 0.1;
  const int res = static_cast<int>(state.range(0));
  const BoxDomain dom = BoxDomain::unit(2, res);
  const auto w = make_power_bond(1.0, 2.0, 2.0);
  const auto u = DeformationField::quadratic(Matrix::diagonal({1.0, 2.0}), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(nonlocal_energy(w, 0.0, delta, u, dom));
  state.counters["cells"] = static_cast<double>(dom.cell_count());
}
BENCHMARK(BM_NonlocalEnergy2d)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_NonlocalEnergy3d(benchmark::State& state) {
  const BoxDomain dom = BoxDomain::unit(3, 12);
  const auto w = make_power_bond(1.0, 2.0, 2.0);
  const auto u = DeformationField::affine(Matrix::diagonal({1.0, 2.0, 0.5}));
  for (auto _ : state) benchmark::DoNotOptimize(nonlocal_energy(w, 0.0, 0.3, u, dom));
}
BENCHMARK(BM_NonlocalEnergy3d)->Unit(benchmark::kMillisecond);
