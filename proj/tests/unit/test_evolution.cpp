#include <gtest/gtest.h>

#include <json.hpp>

#include "common.hpp"
#include "modspec/evolution.hpp"
#include "modspec/multiplier.hpp"

using namespace modspec;
using namespace testing_support;

namespace {

double omega(const Point& xi, int eps) {
  const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  return r2 * r2 + eps * r2;
}

NonlinearitySpec quartic() { return NonlinearitySpec::simple({1, 1}, {4, 4}); }

PicardRun small_run(double delta, const GridSpec& g) {
  PicardRun run;
  run.u0 = gaussian(g, 1.0, delta);
  run.eps = 1;
  run.spec = quartic();
  run.window = g;
  run.iterates = 4;
  return run;
}

}  // namespace

TEST(Duhamel, ZeroAndLinearity) {
  const GridSpec g = small_grid(2, 32, 0.5, 8);
  const auto A0 = duhamel(SpacetimeField::zeros(g), 1);
  for (int m = 0; m <= g.time_steps; ++m) EXPECT_EQ(l2_sum(A0.slice(m)), 0);

  Rng rng(1);
  const auto f = SpacetimeField::generate(g, [&](int, double) { return random_band(g, rng, 2); });
  const auto h = SpacetimeField::generate(g, [&](int, double) { return random_band(g, rng, 2); });
  const cplx a(0.5, -2);
  const auto lhs = duhamel(a * f + h, 0);
  const auto Af = duhamel(f, 0), Ah = duhamel(h, 0);
  EXPECT_EQ(l2_sum(lhs.slice(0)), 0);
  for (int m = 1; m <= g.time_steps; ++m) EXPECT_LT(rel_diff(lhs.slice(m), a * Af.slice(m) + Ah.slice(m)), 1e-13);
}

TEST(Duhamel, ConstantInTimePlaneWaveIsExact) {
  const GridSpec g = small_grid(2, 64, 1.3, 7);
  for (int eps : {0, 1}) {
    for (const Point& k : {Point{1, 0, 0}, Point{0.25, -2, 0}, Point{7.5, 7.5, 0}}) {
      const auto e = plane_wave(g, k);
      const auto A = duhamel(SpacetimeField::generate(g, [&](int, double) { return e; }), eps);
      const double w = omega(k, eps);
      for (int m = 0; m <= g.time_steps; ++m) {
        const double t = g.time_at(m);
        const cplx c = (std::polar(1.0, t * w) - 1.0) / (cplx(0, 1) * w);
        EXPECT_LT(rel_diff(A.slice(m), c * e), 1e-10) << eps << " " << k[0] << " " << m;
      }
    }
  }
}

TEST(Duhamel, SecondOrderUnderRefinement) {
  Rng rng(8);
  const GridSpec g0 = small_grid(2, 32, 1.0, 8);
  const auto a = random_band(g0, rng, 2), b = random_band(g0, rng, 2);
  auto terminal = [&](int steps) {
    const GridSpec g = small_grid(2, 32, 1.0, steps);
    const auto f = SpacetimeField::generate(
        g, [&](int, double t) { return cplx(std::cos(3 * t), 0) * a + cplx(0, std::exp(-t)) * b; });
    return duhamel(f, 1).slice(steps);
  };
  const auto c = terminal(8), m = terminal(32), f = terminal(128);
  const double order = std::log(l2_diff(c, m) / l2_diff(m, f)) / std::log(4.0);
  EXPECT_GE(order, 1.9);
}

TEST(Nonlinearity, ZeroAndPlaneWaveCube) {
  const GridSpec g = small_grid();
  EXPECT_EQ(l2_sum(evaluate_nonlinearity(SpatialField::zeros(g), quartic())), 0);
  const auto spec = NonlinearitySpec::simple({1, 0}, {1, 1}, false);
  const Point k{1, 0.5, 0};
  const auto u = plane_wave(g, k);
  const auto got = evaluate_nonlinearity(u, spec);
  const auto want = std::pow(cplx(0, 2 * k[0]), 3) * plane_wave(g, {2 * k[0], 2 * k[1], 0});
  EXPECT_LT(rel_diff(got, want), 1e-12);
  EXPECT_THROW(evaluate_nonlinearity(u, NonlinearitySpec::simple({1, 1}, {1, 1}, true)), std::invalid_argument);
}

TEST(Nonlinearity, GeneralModulusSquaredMatchesDirectLoop) {
  const GridSpec g = small_grid();
  Rng rng(12);
  const auto u = random_band(g, rng, 2.5);
  const cplx c(0.3, 2);
  Monomial mono{c, {Factor{}, Factor{{0, 0, 0}, true}}};
  const auto spec = NonlinearitySpec::general({mono}, 1, 1, false);
  const auto got = evaluate_nonlinearity(u, spec).as_physical();
  const auto pu = u.as_physical();
  double err = 0, ref = 0;
  for (std::size_t i = 0; i < pu.size(); ++i) {
    err = std::max(err, std::abs(got[i] - c * std::norm(pu[i])));
    ref = std::max(ref, std::abs(c * std::norm(pu[i])));
  }
  EXPECT_LT(err / ref, 1e-12);
}

TEST(Nonlinearity, ConjugationSymmetry) {
  const GridSpec g = small_grid();
  Rng rng(21);
  const cplx c(1, 0.5);
  Factor du{{1, 0, 0}, false}, dub{{1, 0, 0}, true}, u{}, ub{{0, 0, 0}, true};
  const auto spec = NonlinearitySpec::general(
      {Monomial{c, {du, u, ub}}, Monomial{std::conj(c), {dub, ub, u}}}, 2, 2, false);
  ASSERT_TRUE(spec.conjugation_symmetric());
  EXPECT_FALSE(NonlinearitySpec::general({Monomial{c, {du, u, ub}}}, 2, 2, false).conjugation_symmetric());
  const auto v = random_band(g, rng, 1.5);
  // A bar-swap closed term set is real-valued.
  const auto F = evaluate_nonlinearity(v, spec);
  EXPECT_LT(rel_diff(conj(F), F), 1e-12);
  // Real coefficients make F commute with conjugation of its argument.
  const auto real = NonlinearitySpec::general({Monomial{2, {du, u, ub}}, Monomial{-1, {dub, u, u}}}, 2, 2, false);
  EXPECT_LT(rel_diff(evaluate_nonlinearity(conj(v), real), conj(evaluate_nonlinearity(v, real))), 1e-12);
}

TEST(Nonlinearity, TelescopedDifferenceMatchesDirect) {
  const GridSpec g = small_grid();
  Rng rng(5);
  const auto u = cplx(0.3) * random_band(g, rng, 1.5);
  const auto d = cplx(1e-3) * random_band(g, rng, 1.5);
  const auto v = u - d;
  const auto spec = NonlinearitySpec::simple({1, cplx(0, 1)}, {4, 4});
  const auto tele = evaluate_difference(u, v, d, spec);
  const auto direct = evaluate_nonlinearity(u, spec) - evaluate_nonlinearity(v, spec);
  EXPECT_LT(rel_diff(tele, direct), 1e-9);
  EXPECT_EQ(l2_sum(evaluate_difference(u, u, SpatialField::zeros(g), spec)), 0);
}

TEST(Picard, ZeroDataIsAFixedPoint) {
  const GridSpec g = small_grid(2, 32, 0.25, 4);
  PicardRun run = small_run(0, g);
  run.u0 = SpatialField::zeros(g);
  const auto out = picard_iterate(run);
  for (double x : out.x_norms) EXPECT_EQ(x, 0);
  for (double d : out.differences) EXPECT_EQ(d, 0);
  EXPECT_THROW(
      [&] {
        auto r = run;
        r.iterates = 2;
        picard_iterate(r);
      }(),
      std::invalid_argument);
}

TEST(Picard, SmallDataContractsLargeDataDoesNot) {
  const GridSpec g = small_grid(2, 32, 1.0, 8);
  const auto small = picard_iterate(small_run(1e-3, g));
  EXPECT_TRUE(small.contraction) << small.to_json();
  EXPECT_EQ(small.status, "contraction");
  for (double r : small.ratios) EXPECT_LT(r, 1e-6);
  const auto j = nlohmann::json::parse(small.to_json());
  EXPECT_EQ(j["differences"].size(), small.differences.size());

  const auto big = picard_iterate(small_run(10, g));
  EXPECT_FALSE(big.contraction);
  EXPECT_TRUE(big.status == "no-contraction" || big.status == "diverged") << big.status;
}

TEST(Picard, RatioNondecreasingInAmplitude) {
  const GridSpec g = small_grid(2, 32, 1.0, 8);
  double prev = 0;
  for (double delta : {1e-4, 1e-3, 1e-2}) {
    const auto run = picard_iterate(small_run(delta, g));
    const double r = run.ratios.front();
    EXPECT_GE(r, prev) << delta;
    prev = r;
  }
}

TEST(Evolve, LinearFlowMatchesPropagator) {
  const GridSpec g = small_grid();
  Rng rng(6);
  const auto u0 = random_band(g, rng, 4);
  const auto zero = NonlinearitySpec::simple({0, 0}, {4, 4});
  ASSERT_TRUE(zero.is_zero());
  const auto U = evolve(u0, 1, zero, 2.0, 16, 4);
  ASSERT_EQ(U.count(), 5u);
  EXPECT_LT(rel_diff(U.slice(4), propagate(u0, 2.0, 1)), 1e-12);
  EXPECT_NEAR(l2_sum(U.slice(4)) / l2_sum(u0), 1.0, 1e-12);
  EXPECT_THROW(evolve(u0, 1, zero, 2.0, 16, 3), std::invalid_argument);
}

TEST(Evolve, SmallDataSelfConvergence) {
  const GridSpec g = small_grid(2, 64);
  const auto u0 = gaussian(g, 1.0, 1e-3);
  const auto a = evolve(u0, 1, quartic(), 1.0, 32, 1);
  const auto b = evolve(u0, 1, quartic(), 1.0, 64, 1);
  EXPECT_LT(l2_diff(a.slice(1), b.slice(1)) * std::sqrt(g.cell_volume()), 1e-8);
}

TEST(Evolve, SatisfiesDuhamelIdentity) {
  const GridSpec g = small_grid(2, 64, 0.5, 64);
  const auto spec = NonlinearitySpec::simple({1, 1}, {2, 2}, false);
  const auto u0 = gaussian(g, 1.5, 0.2);
  const auto U = evolve(u0, 1, spec, g.horizon, g.time_steps);
  const auto F = SpacetimeField::generate(g, [&](int m, double) { return evaluate_nonlinearity(U.slice(m), spec); });
  const auto A = duhamel(F, 1);
  const int last = g.time_steps;
  const auto rhs = propagate(u0, g.horizon, 1) - cplx(0, 1) * A.slice(last);
  const double residual = l2_diff(U.slice(last), rhs) * std::sqrt(g.cell_volume());
  EXPECT_LT(residual, 1e-5);
  // The identity is not vacuous: the nonlinear part is well above the residual.
  EXPECT_GT(l2_sum(A.slice(last)) * std::sqrt(g.cell_volume()), 100 * residual);
}
