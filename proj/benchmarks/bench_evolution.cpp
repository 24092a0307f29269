#include <benchmark/benchmark.h>

#include <numbers>

#include "modspec/evolution.hpp"
#include "modspec/random.hpp"

using namespace modspec;

static void BM_Nonlinearity(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(2, 8 * std::numbers::pi, 320);
  const SpatialField u = gaussian(g, 1.0, 0.1);
  const auto spec = NonlinearitySpec::simple({1.0, 1.0}, {int(st.range(0)), int(st.range(0))});
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_nonlinearity(u, spec).values().data());
}
BENCHMARK(BM_Nonlinearity)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Duhamel(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(2, 8 * std::numbers::pi, 320, 1.0, int(st.range(0)));
  const SpatialField f = gaussian(g, 1.0);
  const auto F = SpacetimeField::generate(g, [&](int, double t) { return cplx(std::cos(t), 0) * f; });
  for (auto _ : st) benchmark::DoNotOptimize(duhamel(F, 1).slice(0).values().data());
}
BENCHMARK(BM_Duhamel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EvolveStep(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(2, 8 * std::numbers::pi, 320);
  const SpatialField u = gaussian(g, 1.0, 1e-3);
  const auto spec = NonlinearitySpec::simple({1.0, 1.0}, {4, 4});
  for (auto _ : st) benchmark::DoNotOptimize(evolve(u, 1, spec, 0.1, 10, 1).slice(1).values().data());
  st.SetItemsProcessed(st.iterations() * 10);
}
BENCHMARK(BM_EvolveStep)->Unit(benchmark::kMillisecond);
