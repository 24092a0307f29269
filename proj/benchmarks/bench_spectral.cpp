#include <benchmark/benchmark.h>

#include <numbers>

#include "modspec/decomp.hpp"
#include "modspec/multiplier.hpp"
#include "modspec/random.hpp"

using namespace modspec;

namespace {

GridSpec grid(int n) { return GridSpec::cube(2, n * std::numbers::pi / 40, n); }

SpatialField noise(const GridSpec& g) {
  Rng rng(1);
  return random_spectrum(g, rng, [](const Point&) { return 1.0; });
}

}  // namespace

static void BM_ForwardInverse(benchmark::State& st) {
  const GridSpec g = grid(int(st.range(0)));
  SpatialField f = noise(g).as_physical();
  for (auto _ : st) {
    SpatialField h = f.as_frequency().as_physical();
    benchmark::DoNotOptimize(h.values().data());
  }
  st.SetItemsProcessed(st.iterations() * int64_t(g.size()));
}
BENCHMARK(BM_ForwardInverse)->Arg(160)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

static void BM_Propagate(benchmark::State& st) {
  const GridSpec g = grid(int(st.range(0)));
  const SpatialField f = noise(g);
  for (auto _ : st) benchmark::DoNotOptimize(propagate(f, 0.37, 1).values().data());
}
BENCHMARK(BM_Propagate)->Arg(320)->Arg(640)->Unit(benchmark::kMillisecond);

static void BM_BoxProject(benchmark::State& st) {
  const GridSpec g = grid(320);
  const DecompositionFamily fam(g);
  const SpatialField f = noise(g);
  const Index k{int(st.range(0)), -3, 0};
  for (auto _ : st) benchmark::DoNotOptimize(box_project(f, fam, k).values().data());
}
BENCHMARK(BM_BoxProject)->Arg(0)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_BoxEnergyAllCubes(benchmark::State& st) {
  const GridSpec g = grid(320);
  const DecompositionFamily fam(g);
  const SpatialField f = noise(g);
  const auto ks = fam.indices();
  for (auto _ : st) {
    double s = 0;
    for (const auto& k : ks) s += box_energy(f, fam, k);
    benchmark::DoNotOptimize(s);
  }
  st.counters["cubes"] = double(ks.size());
}
BENCHMARK(BM_BoxEnergyAllCubes)->Unit(benchmark::kMillisecond);
