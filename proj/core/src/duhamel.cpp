#include <cmath>

#include "modspec/evolution.hpp"

namespace modspec {

namespace {

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, with series near z = 0.
void phis(cplx z, cplx ez, cplx& p1, cplx& p2) {
  if (std::abs(z) < 0.5) {
    cplx term = 1.0, s1 = 0, s2 = 0;
    // term = z^j / j!; phi1 = sum z^j/(j+1)!, phi2 = sum z^j/(j+2)!
    for (int j = 0; j < 24; ++j) {
      s1 += term / double(j + 1);
      s2 += term / (double(j + 1) * double(j + 2));
      term *= z / double(j + 1);
    }
    p1 = s1;
    p2 = s2;
    return;
  }
  p1 = (ez - 1.0) / z;
  p2 = (ez - 1.0 - z) / (z * z);
}

}  // namespace

SpacetimeField duhamel(const SpacetimeField& f, int eps) {
  require_eps(eps);
  const GridSpec& g = f.grid();
  const double h = g.dt();
  const std::size_t n = g.size();
  std::vector<cplx> E(n), A(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = dispersion(frequency_of(g, i), g.dim, eps);
    const cplx z(0, w * h);
    E[i] = phase(h, w);
    cplx p1, p2;
    phis(z, E[i], p1, p2);
    A[i] = h * (p1 - p2);  // weight of f(t_m)
    B[i] = h * p2;         // weight of f(t_{m+1})
  }
  std::vector<SpatialField> out;
  out.reserve(f.count());
  out.emplace_back(g, Representation::Frequency);
  SpatialField prev = f.slice(0).as_frequency();
  for (int m = 0; m < g.time_steps; ++m) {
    SpatialField next = f.slice(m + 1).as_frequency();
    SpatialField a(g, Representation::Frequency);
    const SpatialField& am = out.back();
    for (std::size_t i = 0; i < n; ++i) a[i] = E[i] * am[i] + A[i] * prev[i] + B[i] * next[i];
    out.push_back(std::move(a));
    prev = std::move(next);
  }
  return SpacetimeField(g, std::move(out));
}

}  // namespace modspec
