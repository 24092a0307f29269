#include "modspec/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "modspec/random.hpp"

namespace modspec {

namespace {

double h(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = h(x);
  return a / (a + h(1 - x));
}

double rho(double s) { return smooth_step(2.0 - 2.0 * std::abs(s)); }

double eta(int k, double s) {
  const double num = rho(s - k);
  if (num == 0) return 0.0;
  const double l = std::floor(s);
  return num / (rho(s - l) + rho(s - l - 1));
}

double psi(double x) { return smooth_step(2.0 - x); }

double bracket(const Index& k, int dim) {
  double r2 = 0;
  for (int a = 0; a < dim; ++a) r2 += double(k[a]) * k[a];
  return 1.0 + std::sqrt(r2);
}

int kmax_of(const Index& k, int dim) {
  int m = 0;
  for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(k[a]));
  return m;
}

DecompositionFamily::DecompositionFamily(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const double reach = std::sqrt(static_cast<double>(grid_.dim));
  for (int a = 0; a < grid_.dim; ++a) {
    const double dxi = grid_.dxi(a);
    if (dxi > 0.25 * (1 + 1e-12)) throw GridError("build_family: unit cubes under-resolved");
    // Edge policy: keep cubes whose sqrt(n)-neighbourhood lies inside the lattice band.
    const int e = static_cast<int>(std::floor(grid_.kmax(a) - reach - 1e-12));
    if (e < 0) throw GridError("build_family: band too narrow for any cube");
    edge_[a] = e;
    support_[a].resize(2 * e + 1);
    for (int k = -e; k <= e; ++k) {
      AxisSupport s;
      const int lo = static_cast<int>(std::floor((k - 1) / dxi)) + 1;
      const int hi = static_cast<int>(std::ceil((k + 1) / dxi)) - 1;
      for (int m = lo; m <= hi; ++m) {
        const double v = eta(k, m * dxi);
        if (s.w.empty() && v == 0) continue;
        if (s.w.empty()) s.lo = m;
        s.w.push_back(v);
      }
      while (!s.w.empty() && s.w.back() == 0) s.w.pop_back();
      support_[a][k + e] = std::move(s);
    }
  }
}

DecompositionFamily build_family(const GridSpec& grid) { return DecompositionFamily(grid); }

bool DecompositionFamily::contains(const Index& k) const {
  for (int a = 0; a < kMaxDim; ++a) {
    if (a < grid_.dim) {
      if (std::abs(k[a]) > edge_[a]) return false;
    } else if (k[a] != 0) {
      return false;
    }
  }
  return true;
}

void require_member(const DecompositionFamily& fam, const Index& k, const char* what) {
  if (!fam.contains(k)) throw std::out_of_range(std::string(what) + ": cube index outside the resolved set");
}

std::vector<Index> DecompositionFamily::indices() const {
  std::vector<Index> out;
  out.reserve(size());
  const int e0 = edge_[0];
  const int e1 = grid_.dim > 1 ? edge_[1] : 0;
  const int e2 = grid_.dim > 2 ? edge_[2] : 0;
  for (int a = -e0; a <= e0; ++a)
    for (int b = -e1; b <= e1; ++b)
      for (int c = -e2; c <= e2; ++c) out.push_back({a, b, c});
  return out;
}

std::size_t DecompositionFamily::size() const {
  std::size_t n = 1;
  for (int a = 0; a < grid_.dim; ++a) n *= static_cast<std::size_t>(2 * edge_[a] + 1);
  return n;
}

const AxisSupport& DecompositionFamily::axis_support(int axis, int k) const {
  return support_[axis][k + edge_[axis]];
}

int DecompositionFamily::centre_index(int axis, int k) const {
  return static_cast<int>(std::lround(k / grid_.dxi(axis)));
}

double DecompositionFamily::sigma(const Index& k, const Point& xi) const {
  double v = 1;
  for (int a = 0; a < grid_.dim && v != 0; ++a) v *= eta(k[a], xi[a]);
  return v;
}

double DecompositionFamily::realized_c() const {
  // eta_k is even about k and decreasing in |s - k|, so the minimum over Q_k sits at a corner.
  return std::pow(eta(0, 0.5), grid_.dim);
}

bool DecompositionFamily::in_interior(const Point& xi) const {
  for (int a = 0; a < grid_.dim; ++a)
    if (std::abs(xi[a]) > edge_[a] + 1e-12) return false;
  return true;
}

namespace {

// Calls fn(flat index, sigma weight) over the support of sigma_k.
template <class Fn>
void for_each_patch(const DecompositionFamily& fam, const Index& k, Fn&& fn) {
  const GridSpec& g = fam.grid();
  const auto st = g.strides();
  const AxisSupport* s[kMaxDim];
  AxisSupport unit{0, {1.0}};
  for (int a = 0; a < kMaxDim; ++a) s[a] = a < g.dim ? &fam.axis_support(a, k[a]) : &unit;
  for (std::size_t i0 = 0; i0 < s[0]->w.size(); ++i0) {
    const std::size_t o0 = g.freq_slot(0, s[0]->lo + int(i0)) * st[0];
    const double w0 = s[0]->w[i0];
    for (std::size_t i1 = 0; i1 < s[1]->w.size(); ++i1) {
      const std::size_t o1 = o0 + (g.dim > 1 ? g.freq_slot(1, s[1]->lo + int(i1)) * st[1] : 0);
      const double w1 = w0 * s[1]->w[i1];
      for (std::size_t i2 = 0; i2 < s[2]->w.size(); ++i2) {
        const std::size_t o2 = o1 + (g.dim > 2 ? g.freq_slot(2, s[2]->lo + int(i2)) : 0);
        fn(o2, w1 * s[2]->w[i2]);
      }
    }
  }
}

}  // namespace

SpatialField box_project(const SpatialField& f, const DecompositionFamily& fam, const Index& k) {
  require_member(fam, k, "box_project");
  require_same_space(f.grid(), fam.grid(), "box_project");
  const SpatialField F = f.as_frequency();
  SpatialField out(f.grid(), Representation::Frequency);
  for_each_patch(fam, k, [&](std::size_t i, double w) { out[i] = w * F[i]; });
  return f.is_physical() ? inverse_transform(out) : out;
}

SpacetimeField box_project(const SpacetimeField& F, const DecompositionFamily& fam, const Index& k) {
  std::vector<SpatialField> s;
  s.reserve(F.count());
  for (const auto& f : F.slices()) s.push_back(box_project(f, fam, k));
  return SpacetimeField(F.grid(), std::move(s));
}

double box_energy(const SpatialField& F, const DecompositionFamily& fam, const Index& k) {
  if (!F.is_frequency()) throw ContractError("box_energy: expects frequency representation");
  double e = 0;
  for_each_patch(fam, k, [&](std::size_t i, double w) { e += w * w * std::norm(F[i]); });
  return e;
}

double band_leakage(const SpatialField& f, const DecompositionFamily& fam) {
  const SpatialField F = f.as_frequency();
  double out = 0, total = 0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double e = std::norm(F[i]);
    total += e;
    if (!fam.in_interior(frequency_of(F.grid(), i))) out += e;
  }
  return total > 0 ? out / total : 0.0;
}

void require_band_limited(const SpatialField& f, const DecompositionFamily& fam, const char* what,
                          double tol) {
  const double leak = band_leakage(f, fam);
  if (leak > tol)
    throw std::domain_error(std::string(what) + ": mass outside the resolved band (fraction " +
                            std::to_string(leak) + ")");
}

OrthogonalityReport almost_orthogonality_check(const DecompositionFamily& fam, int samples,
                                               std::uint64_t seed, int max_offset,
                                               double threshold) {
  const GridSpec& g = fam.grid();
  const int d = g.dim;
  Rng rng(seed);
  OrthogonalityReport rep;
  rep.samples = samples;
  rep.max_residual.assign(static_cast<std::size_t>(max_offset) + 1, 0.0);
  // Keep k1 + k2 + offset well inside the band so the product is alias free.
  const int spread = std::max(1, std::min(4, (fam.edge(0) - max_offset - 2) / 3));
  for (int s = 0; s < samples; ++s) {
    Index k1{0, 0, 0}, k2{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      k1[a] = rng.uniform_int(-spread, spread);
      k2[a] = rng.uniform_int(-spread, spread);
    }
    const SpatialField u = random_box_field(fam, k1, rng).as_physical();
    const SpatialField v = random_box_field(fam, k2, rng).as_physical();
    SpatialField p(g, Representation::Physical);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = u[i] * v[i];
    const SpatialField P = forward_transform(p);
    const double pn = P.coefficient_norm();
    const int axis = rng.uniform_int(0, d - 1);
    const int sign = rng.uniform_int(0, 1) ? 1 : -1;
    for (int off = 0; off <= max_offset; ++off) {
      Index k{0, 0, 0};
      for (int a = 0; a < d; ++a) k[a] = k1[a] + k2[a];
      // Generic transverse jitter within the offset keeps |k - k1 - k2|_inf == off.
      for (int a = 0; a < d; ++a)
        if (a != axis) k[a] += rng.uniform_int(-off, off);
      k[axis] += sign * off;
      if (!fam.contains(k)) continue;
      const double r = std::sqrt(box_energy(P, fam, k)) / pn;
      rep.max_residual[off] = std::max(rep.max_residual[off], r);
    }
  }
  rep.measured_c = max_offset + 1;
  for (int off = max_offset; off >= 0; --off) {
    if (rep.max_residual[off] >= threshold) break;
    rep.measured_c = off;
  }
  return rep;
}

double ratio_symbol(const Point& xi, int i, int j, int variant) {
  const double ai = std::abs(xi[i]);
  const double aj = std::abs(xi[j]);
  double p1;
  if (aj == 0) {
    p1 = 1.0;
  } else if (ai == 0) {
    p1 = 0.0;
  } else {
    p1 = psi(aj / (2 * ai));
  }
  return variant == 1 ? p1 : 1.0 - p1;
}

namespace {

void require_pair(const GridSpec& g, int i, int j, int variant) {
  if (i == j) throw std::invalid_argument("ratio cutoff: axes must differ");
  if (i < 0 || j < 0 || i >= g.dim || j >= g.dim) throw std::out_of_range("ratio cutoff: axis out of range");
  if (variant != 1 && variant != 2) throw std::invalid_argument("ratio cutoff: variant must be 1 or 2");
}

}  // namespace

RatioCutoff make_ratio_cutoff(const GridSpec& grid, int i, int j, int variant) {
  require_pair(grid, i, j, variant);
  return {i, j, variant,
          Multiplier::from_function(grid, variant == 1 ? "psi1" : "psi2",
                                    [&](const Point& xi) { return cplx(ratio_symbol(xi, i, j, variant)); })};
}

SpatialField ratio_project(const SpatialField& f, int i, int j, int variant) {
  require_pair(f.grid(), i, j, variant);
  SpatialField F = f.as_frequency();
  for (std::size_t n = 0; n < F.size(); ++n) F[n] *= ratio_symbol(frequency_of(F.grid(), n), i, j, variant);
  return f.is_physical() ? inverse_transform(F) : F;
}

SpacetimeField ratio_project(const SpacetimeField& F, int i, int j, int variant) {
  std::vector<SpatialField> s;
  s.reserve(F.count());
  for (const auto& f : F.slices()) s.push_back(ratio_project(f, i, j, variant));
  return SpacetimeField(F.grid(), std::move(s));
}

void dump_family_csv(const DecompositionFamily& fam, std::ostream& os, const std::vector<Index>& subset) {
  const int d = fam.dim();
  for (int a = 0; a < d; ++a) os << "k" << a + 1 << ",";
  for (int a = 0; a < d; ++a) os << "offset" << a + 1 << ",";
  os << "sigma\n";
  const auto ks = subset.empty() ? fam.indices() : subset;
  os.precision(17);
  for (const auto& k : ks) {
    require_member(fam, k, "dump_family_csv");
    const AxisSupport* s[kMaxDim];
    AxisSupport unit{0, {1.0}};
    for (int a = 0; a < kMaxDim; ++a) s[a] = a < d ? &fam.axis_support(a, k[a]) : &unit;
    for (std::size_t i0 = 0; i0 < s[0]->w.size(); ++i0)
      for (std::size_t i1 = 0; i1 < s[1]->w.size(); ++i1)
        for (std::size_t i2 = 0; i2 < s[2]->w.size(); ++i2) {
          const std::size_t ii[3] = {i0, i1, i2};
          for (int a = 0; a < d; ++a) os << k[a] << ",";
          for (int a = 0; a < d; ++a) os << s[a]->lo + int(ii[a]) - fam.centre_index(a, k[a]) << ",";
          os << s[0]->w[i0] * s[1]->w[i1] * s[2]->w[i2] << "\n";
        }
  }
}

}  // namespace modspec
