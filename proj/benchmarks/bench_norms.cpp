#include <benchmark/benchmark.h>

#include <numbers>

#include "modspec/norms.hpp"
#include "modspec/random.hpp"

using namespace modspec;

namespace {

const GridSpec kDesk = GridSpec::cube(2, 8 * std::numbers::pi, 320, 0.25, 8);

SpatialField band(double R) {
  Rng rng(3);
  return random_spectrum(kDesk, rng, [R](const Point& xi) {
    return std::abs(xi[0]) <= R && std::abs(xi[1]) <= R ? 1.0 : 0.0;
  });
}

}  // namespace

static void BM_ModulationNorm(benchmark::State& st) {
  const DecompositionFamily fam(kDesk);
  const SpatialField f = band(double(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(modulation_norm(f, 1.5, fam).value);
}
BENCHMARK(BM_ModulationNorm)->Arg(8)->Arg(36)->Unit(benchmark::kMillisecond);

static void BM_MixedNorm(benchmark::State& st) {
  const SpacetimeField U = free_evolution(band(36), 1, kDesk);
  const NormSpec spec = st.range(0) == 0 ? NormSpec::anisotropic(0, kInf, 2) : NormSpec::strichartz(kInf, 2);
  for (auto _ : st) benchmark::DoNotOptimize(mixed_norm(U, spec));
}
BENCHMARK(BM_MixedNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_XNorm(benchmark::State& st) {
  const DecompositionFamily fam(kDesk);
  const SpacetimeField U = free_evolution(band(double(st.range(0))), 1, kDesk);
  for (auto _ : st) benchmark::DoNotOptimize(x_norm(U, XVariant::X1, fam, {4}).value);
}
BENCHMARK(BM_XNorm)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
