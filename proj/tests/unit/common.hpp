#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "modspec/decomp.hpp"
#include "modspec/field.hpp"
#include "modspec/random.hpp"

namespace testing_support {

using modspec::cplx;

// L = 8 pi, N = 64: lattice spacing 1/4, K_max = 8.
inline modspec::GridSpec small_grid(int dim = 2, int N = 64, double T = 1.0, int steps = 16) {
  return modspec::GridSpec::cube(dim, 8 * std::numbers::pi, N, T, steps);
}

inline double l2_diff(const modspec::SpatialField& a, const modspec::SpatialField& b) {
  const auto pa = a.as_physical();
  const auto pb = b.as_physical();
  double s = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) s += std::norm(pa[i] - pb[i]);
  return std::sqrt(s);
}

inline double l2_sum(const modspec::SpatialField& a) {
  const auto pa = a.as_physical();
  double s = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) s += std::norm(pa[i]);
  return std::sqrt(s);
}

inline double rel_diff(const modspec::SpatialField& a, const modspec::SpatialField& b) {
  const double n = std::max(l2_sum(a), l2_sum(b));
  return n == 0 ? 0 : l2_diff(a, b) / n;
}

inline modspec::SpatialField random_physical(const modspec::GridSpec& g, modspec::Rng& rng) {
  modspec::SpatialField f(g, modspec::Representation::Physical);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.complex_normal();
  return f;
}

// White noise on the frequency lattice restricted to |xi_i| <= R on every axis.
inline modspec::SpatialField random_band(const modspec::GridSpec& g, modspec::Rng& rng, double R) {
  return modspec::random_spectrum(g, rng, [&](const modspec::Point& xi) {
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(xi[a]) > R) return 0.0;
    return 1.0;
  });
}

inline modspec::SpatialField plane_wave(const modspec::GridSpec& g, const modspec::Point& k) {
  return modspec::SpatialField::sample(g, [&](const modspec::Point& x) {
    double ph = 0;
    for (int a = 0; a < g.dim; ++a) ph += k[a] * x[a];
    return std::polar(1.0, ph);
  });
}

}  // namespace testing_support
