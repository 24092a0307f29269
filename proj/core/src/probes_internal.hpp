#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "modspec/local.hpp"
#include "modspec/multiplier.hpp"
#include "modspec/probes.hpp"
#include "modspec/random.hpp"
#include "norms_internal.hpp"

namespace modspec::probe_detail {

inline double euclid(const Index& k, int dim) {
  double s = 0;
  for (int a = 0; a < dim; ++a) s += double(k[a]) * k[a];
  return std::sqrt(s);
}

// Time for a wave packet at cube k to cross the box once along `axis`.
inline double transit_window(const GridSpec& g, const Index& k, int axis, int eps) {
  const double ka = std::max(1.0, std::abs(double(k[axis])));
  const double r2 = std::max(1.0, euclid(k, g.dim) * euclid(k, g.dim));
  return g.length[axis] / (4 * r2 * ka + 2 * eps * ka);
}

// ||Box_k f||_2 from the coefficients.
inline double box_l2(const SpatialField& F, const DecompositionFamily& fam, const Index& k) {
  return std::sqrt(fam.grid().cell_volume()) * std::sqrt(box_energy(F.as_frequency(), fam, k));
}

inline double cube_norm(const SpacetimeField& coarse, const NormSpec& spec) {
  return detail::mixed_norm(detail::modulus(coarse), spec);
}

inline PatchSymbol fractional(int axis, double order) {
  return [=](const Point& xi) { return cplx(std::pow(std::abs(xi[axis]), order), 0); };
}

inline PatchSymbol derivative(int axis, int order) {
  return [=](const Point& xi) { return derivative_symbol(xi[axis], order); };
}

inline PatchSymbol compose(PatchSymbol a, PatchSymbol b) {
  return [=](const Point& xi) { return a(xi) * b(xi); };
}

// f(t) = S(t) sum_q b_q(t / T) g_q with g_q = sigma_k * noise and smooth random envelopes
// b_q(s) = cos(pi q s + phi_q): every mode is forced at its own frequency, so
// A f(t) = S(t) sum_q B_q(t) g_q with B_q the antiderivative of b_q.
class ResonantForcing {
 public:
  ResonantForcing(const DecompositionFamily& fam, const Index& k, Rng& rng, int modes = 3);

  // Box_j m(D) f, or Box_j m(D) A f when `integrated`, on the coarse grid of the sampler.
  SpacetimeField sample(const CubeSampler& sampler, const Index& j, int eps, const GridSpec& window,
                        const PatchSymbol& m, bool integrated) const;
  // f on the full grid (frequency representation).
  SpacetimeField field(int eps, const GridSpec& window) const;
  double envelope(int q, double t, double T) const;
  double integral(int q, double t, double T) const;
  std::vector<Index> cubes() const;

 private:
  const DecompositionFamily* fam_;
  std::vector<SpatialField> g_;
  std::vector<double> phi_;
};

// Index with k[axis] = K and the remaining entries from `rest`.
inline Index make_index(int dim, int axis, int K, int other) {
  Index k{0, 0, 0};
  for (int a = 0; a < dim; ++a) k[a] = a == axis ? K : other;
  return k;
}

inline std::vector<int> as_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) out.push_back(static_cast<int>(std::lround(x)));
  return out;
}

Verdict combine(Verdict a, Verdict b);

// Seeds for independent sub-streams derived from the run seed.
std::uint64_t substream(std::uint64_t seed, std::uint64_t tag);

}  // namespace modspec::probe_detail
