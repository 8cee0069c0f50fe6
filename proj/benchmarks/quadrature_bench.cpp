#include <benchmark/benchmark.h>

#include "perilimit/quadrature.hpp"

using namespace perilimit;

static void BM_BuildSphereRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_sphere_rule(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildSphereRule)->Arg(16)->Arg(32)->Arg(64);

static void BM_SphereSecondMoment(benchmark::State& state) {
  const auto q = build_sphere_rule(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_over_sphere(q, [](const Vector& z) { return z[0] * z[0]; }));
  }
}
BENCHMARK(BM_SphereSecondMoment)->Arg(16)->Arg(32)->Arg(64);
