#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "common.hpp"
#include "modspec/fit.hpp"
#include "modspec/multiplier.hpp"
#include "modspec/norms.hpp"

using namespace modspec;
using namespace testing_support;

namespace {

// Independent evaluation of the bump and the normalized eta profile.
double rho_oracle(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1;
  if (a >= 1) return 0;
  auto h = [](double x) { return x > 0 ? std::exp(-1 / x) : 0.0; };
  const double u = h(2 - 2 * a), v = h(2 * a - 1);
  return u / (u + v);
}

double eta_oracle(int k, double s) {
  double den = 0;
  for (int l = static_cast<int>(std::floor(s)) - 3; l <= static_cast<int>(std::floor(s)) + 3; ++l) den += rho_oracle(s - l);
  return rho_oracle(s - k) / den;
}

}  // namespace

TEST(Bump, ProfileShape) {
  EXPECT_EQ(rho(0), 1);
  EXPECT_EQ(rho(0.5), 1);
  EXPECT_EQ(rho(-0.5), 1);
  EXPECT_EQ(rho(1), 0);
  EXPECT_EQ(rho(1.3), 0);
  for (double s = -1.2; s <= 1.2; s += 0.01) {
    EXPECT_GE(rho(s), 0);
    EXPECT_LE(rho(s), 1);
    EXPECT_DOUBLE_EQ(rho(s), rho(-s));
  }
  EXPECT_EQ(psi(0.3), 1);
  EXPECT_EQ(psi(1), 1);
  EXPECT_EQ(psi(2), 0);
  EXPECT_EQ(psi(5), 0);
}

TEST(Bump, EtaMatchesDirectSummation) {
  Rng rng(12);
  double worst = 0;
  for (int n = 0; n < 10000; ++n) {
    const double s = -10 + 20 * rng.uniform();
    const int k = static_cast<int>(std::lround(s)) + rng.uniform_int(-1, 1);
    worst = std::max(worst, std::abs(eta(k, s) - eta_oracle(k, s)));
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(Family, PartitionOfUnityOnInteriorBand) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  std::vector<double> sum(g.size(), 0.0);
  for (const auto& k : fam.indices())
    for (std::size_t i = 0; i < g.size(); ++i) sum[i] += fam.sigma(k, frequency_of(g, i));
  double worst = 0;
  int interior = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!fam.in_interior(frequency_of(g, i))) continue;
    ++interior;
    worst = std::max(worst, std::abs(sum[i] - 1));
  }
  EXPECT_GT(interior, 1000);
  EXPECT_LT(worst, 1e-12);
}

TEST(Family, TranslationInvarianceBoundsAndSupport) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  const double s00 = fam.sigma({0, 0, 0}, {0, 0, 0});
  EXPECT_GE(s00, 0.2);
  EXPECT_GE(fam.realized_c(), 0.2);
  for (const auto& k : fam.indices()) {
    EXPECT_DOUBLE_EQ(fam.sigma(k, {double(k[0]), double(k[1]), 0}), s00);
    EXPECT_NEAR(fam.sigma(k, {k[0] + 0.5, k[1] - 0.5, 0}), fam.realized_c(), 1e-15);
    EXPECT_EQ(fam.sigma(k, {k[0] + 1.5, double(k[1]), 0}), 0.0);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point xi = frequency_of(g, i);
    const Index k{2, -3, 0};
    const double v = fam.sigma(k, xi);
    EXPECT_GE(v, 0);
    EXPECT_LE(v, 1);
    if (std::hypot(xi[0] - 2, xi[1] + 3) > std::sqrt(2.0)) EXPECT_EQ(v, 0);
  }
}

TEST(Family, EdgePolicyAndUnderResolvedGrid) {
  const DecompositionFamily fam(small_grid());
  EXPECT_EQ(fam.edge(0), 6);  // K_max = 8, minus sqrt(2)
  EXPECT_TRUE(fam.contains({6, -6, 0}));
  EXPECT_FALSE(fam.contains({7, 0, 0}));
  EXPECT_THROW(require_member(fam, {7, 0, 0}, "test"), std::out_of_range);
  GridSpec coarse = small_grid();
  coarse.length = {2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi};
  EXPECT_THROW(DecompositionFamily{coarse}, GridError);
}

TEST(BoxProject, DisjointSupportGivesZero) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  // Spectrum inside Q_(1,1).
  const auto f = SpatialField::spectrum(g, [](const Point& xi) {
    return (std::abs(xi[0] - 1) <= 0.5 && std::abs(xi[1] - 1) <= 0.5) ? cplx(1, 0.5) : cplx(0);
  });
  EXPECT_EQ(l2_sum(box_project(f, fam, {1 + 4, 1, 0})), 0.0);
  EXPECT_GT(l2_sum(box_project(f, fam, {1, 1, 0})), 0.0);
}

TEST(BoxProject, SumReassemblesBandLimitedField) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  Rng rng(8);
  const SpatialField f = random_band(g, rng, fam.edge(0));
  SpatialField acc = SpatialField::zeros(g, Representation::Frequency);
  for (const auto& k : fam.indices()) acc = acc + box_project(f, fam, k);
  EXPECT_LT(rel_diff(acc, f), 1e-11);
}

TEST(BoxProject, NormMatchesMaskOracleAndContracts) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  Rng rng(10);
  const SpatialField f = random_band(g, rng, 6);
  const SpatialField F = f.as_frequency();
  for (const Index& k : {Index{0, 0, 0}, Index{3, -2, 0}, Index{-6, 6, 0}}) {
    double mask = 0;
    for (std::size_t i = 0; i < g.size(); ++i) mask += std::norm(fam.sigma(k, frequency_of(g, i)) * F[i]);
    const double got = l2_sum(box_project(f, fam, k));
    EXPECT_NEAR(got, std::sqrt(mask), 1e-12 * std::sqrt(mask));
    EXPECT_NEAR(box_energy(F, fam, k), mask, 1e-12 * mask);
    EXPECT_LE(got, l2_sum(f));
  }
  EXPECT_THROW(box_project(f, fam, {9, 0, 0}), std::out_of_range);
}

TEST(BoxProject, SpacetimeIsPerSlice) {
  const GridSpec g = small_grid(2, 64, 0.2, 4);
  const DecompositionFamily fam(g);
  Rng rng(1);
  const auto U = free_evolution(random_band(g, rng, 5), 1, g);
  const auto P = box_project(U, fam, {2, 1, 0});
  for (int m = 0; m <= 4; ++m) EXPECT_LT(rel_diff(P.slice(m), box_project(U.slice(m), fam, {2, 1, 0})), 1e-14);
}

TEST(BandLeakage, DetectsMassOutsideBand) {
  const GridSpec g = small_grid();
  const DecompositionFamily fam(g);
  EXPECT_LT(band_leakage(plane_wave(g, {1, 1, 0}), fam), 1e-28);
  EXPECT_NEAR(band_leakage(plane_wave(g, {7.5, 0, 0}), fam), 1.0, 1e-12);
  EXPECT_THROW(require_band_limited(plane_wave(g, {7.5, 0, 0}), fam, "test"), std::domain_error);
}

TEST(AlmostOrthogonality, MeasuredConstantWithinSupportArithmetic) {
  const DecompositionFamily fam(GridSpec::cube(2, 8 * std::numbers::pi, 96));
  const auto rep = almost_orthogonality_check(fam, 6, 42);
  EXPECT_GT(rep.samples, 0);
  EXPECT_LE(rep.measured_c, 2 * static_cast<int>(std::ceil(std::sqrt(2.0))) + 1);
  ASSERT_FALSE(rep.max_residual.empty());
  EXPECT_GT(rep.max_residual[0], 1e-6);  // k = k1 + k2 is generically nonzero
  for (std::size_t d = rep.measured_c; d < rep.max_residual.size(); ++d) EXPECT_LT(rep.max_residual[d], 1e-13);
}

TEST(RatioCutoff, PlateauSupportAndPartition) {
  const GridSpec g = small_grid();
  Rng rng(6);
  // |xi_2| <= |xi_1|: P1 keeps everything.
  auto cone = [&](auto pred) {
    return random_spectrum(g, rng, [&](const Point& xi) { return pred(std::abs(xi[0]), std::abs(xi[1])) ? 1.0 : 0.0; });
  };
  const auto a = cone([](double x1, double x2) { return x1 > 0 && x2 <= x1 && x1 < 6; });
  EXPECT_LT(rel_diff(ratio_project(a, 0, 1, 1), a), 1e-14);
  EXPECT_LT(l2_sum(ratio_project(a, 0, 1, 2)), 1e-14 * l2_sum(a));
  const auto b = cone([](double x1, double x2) { return x2 > 0 && x2 >= 4 * x1 && x2 < 6; });
  EXPECT_LT(rel_diff(ratio_project(b, 0, 1, 2), b), 1e-14);
  const auto f = random_band(g, rng, 6);
  EXPECT_LT(rel_diff(ratio_project(f, 0, 1, 1) + ratio_project(f, 0, 1, 2), f), 1e-12);
  EXPECT_THROW(ratio_project(f, 1, 1, 1), std::invalid_argument);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point xi = frequency_of(g, i);
    const double p2 = ratio_symbol(xi, 0, 1, 2), p1 = ratio_symbol(xi, 0, 1, 1);
    EXPECT_DOUBLE_EQ(p1 + p2, 1.0);
    if (p2 > 0) EXPECT_GE(std::abs(xi[1]), 2 * std::abs(xi[0]));
    if (p1 > 0) EXPECT_LE(std::abs(xi[1]), 4 * std::abs(xi[0]) + (xi[1] == 0 ? 1 : 0));
  }
}

TEST(FamilyDump, CsvRowsCoverTheSupport) {
  const DecompositionFamily fam(small_grid());
  std::ostringstream os;
  dump_family_csv(fam, os, {{0, 0, 0}});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_NE(line.find("sigma"), std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_GT(rows, 0);
  EXPECT_LE(rows, 9 * 9);  // |offset| < 1 cube at spacing 1/4 per axis
}

TEST(Bernstein, NormSwitchConstantIsUniformInK) {
  const GridSpec g = GridSpec::cube(2, 8 * std::numbers::pi, 160);
  const DecompositionFamily fam(g);
  Rng rng(17);
  std::vector<double> C;
  for (const Index& k : {Index{0, 0, 0}, Index{4, 0, 0}, Index{8, -8, 0}, Index{16, 3, 0}, Index{-16, 16, 0}}) {
    double c = 0;
    for (int s = 0; s < 100; ++s) {
      const auto f = random_box_field(fam, k, rng);
      c = std::max(c, lebesgue_norm(f, 4) / lebesgue_norm(f, 2));
    }
    C.push_back(c);
  }
  const double mean = std::accumulate(C.begin(), C.end(), 0.0) / C.size();
  for (double c : C) EXPECT_NEAR(c / mean, 1.0, 0.2);
}

TEST(DerivativeEquivalence, RatioIsKIndependent) {
  const GridSpec g = GridSpec::cube(2, 8 * std::numbers::pi, 160);
  const DecompositionFamily fam(g);
  Rng rng(23);
  for (double sigma : {1.5, 3.0}) {
    for (double p : {2.0, 4.0}) {
      std::vector<double> r;
      for (int k1 : {4, 6, 8, 12, 16}) {
        const Index k{k1, rng.uniform_int(-k1, k1), 0};
        for (int s = 0; s < 5; ++s) {
          const auto f = random_box_field(fam, k, rng);
          r.push_back(lebesgue_norm(riesz_potential(f, 0, sigma), p) /
                      (std::pow(1.0 + k1, sigma) * lebesgue_norm(f, p)));
        }
      }
      EXPECT_LT(spread(r), 10) << "sigma " << sigma << " p " << p;
    }
  }
}
