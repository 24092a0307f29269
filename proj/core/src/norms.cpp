#include "modspec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "norms_internal.hpp"

namespace modspec {

namespace detail {

namespace {

inline double powp(double x, double p, int ip) {
  if (ip > 0) {
    double r = 1, b = x;
    for (int e = ip; e; e >>= 1, b *= b)
      if (e & 1) r *= b;
    return r;
  }
  return std::pow(x, p);
}

inline int integer_exponent(double p) {
  return (p == std::floor(p) && p >= 1 && p <= 64) ? static_cast<int>(p) : 0;
}

}  // namespace

double lp_reduce(const double* v, std::size_t n, std::size_t stride, const double* w, double wconst,
                 double p) {
  double mx = 0;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, v[i * stride]);
  if (mx == 0 || std::isinf(p)) return mx;
  const int ip = integer_exponent(p);
  const double inv = 1.0 / mx;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += (w ? w[i] : wconst) * powp(v[i * stride] * inv, p, ip);
  return mx * std::pow(s, 1.0 / p);
}

std::vector<double> trapezoid_weights(const GridSpec& g) {
  const int S = g.time_steps;
  std::vector<double> w(static_cast<std::size_t>(S) + 1, g.dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Modulus modulus(const SpacetimeField& F) {
  Modulus A{F.grid(), static_cast<int>(F.count()), {}};
  const std::size_t n = F.grid().size();
  A.a.resize(n * F.count());
  for (std::size_t m = 0; m < F.count(); ++m) {
    const SpatialField& s = F.slice(static_cast<int>(m));
    if (s.is_physical()) {
      for (std::size_t x = 0; x < n; ++x) A.a[m * n + x] = std::abs(s[x]);
    } else {
      const SpatialField p = s.as_physical();
      for (std::size_t x = 0; x < n; ++x) A.a[m * n + x] = std::abs(p[x]);
    }
  }
  return A;
}

double mixed_norm(const Modulus& A, const NormSpec& spec) {
  const GridSpec& g = A.grid;
  const std::size_t n = g.size();
  const std::size_t S = static_cast<std::size_t>(A.slices);
  const auto wt = trapezoid_weights(g);
  if (S != wt.size()) throw GridError("mixed_norm: slice count does not match the time window");
  if (spec.axis < 0 && spec.time_outer) {
    std::vector<double> per_t(S);
    for (std::size_t m = 0; m < S; ++m)
      per_t[m] = lp_reduce(A.a.data() + m * n, n, 1, nullptr, g.cell_volume(), spec.p2);
    return lp_reduce(per_t.data(), S, 1, wt.data(), 0, spec.pt);
  }
  // Innermost: time.
  std::vector<double> G(n, 0.0);
  const double* a = A.a.data();
  for (std::size_t m = 0; m < S; ++m)
    for (std::size_t x = 0; x < n; ++x) G[x] = std::max(G[x], a[m * n + x]);
  if (!std::isinf(spec.pt)) {
    const int ip = integer_exponent(spec.pt);
    std::vector<double> inv(n), acc(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) inv[x] = G[x] > 0 ? 1.0 / G[x] : 0.0;
    for (std::size_t m = 0; m < S; ++m) {
      const double* row = a + m * n;
      if (ip == 2) {
        for (std::size_t x = 0; x < n; ++x) {
          const double r = row[x] * inv[x];
          acc[x] += wt[m] * r * r;
        }
      } else {
        for (std::size_t x = 0; x < n; ++x) acc[x] += wt[m] * powp(row[x] * inv[x], spec.pt, ip);
      }
    }
    const double e = 1.0 / spec.pt;
    for (std::size_t x = 0; x < n; ++x)
      if (G[x] > 0) G[x] *= ip == 2 ? std::sqrt(acc[x]) : std::pow(acc[x], e);
  }
  if (spec.axis < 0) return lp_reduce(G.data(), n, 1, nullptr, g.cell_volume(), spec.p2);
  const int i = spec.axis;
  if (i >= g.dim) throw std::out_of_range("mixed_norm: privileged axis out of range");
  const auto sh = g.shape();
  const auto st = g.strides();
  const double other_cell = g.cell_volume() / g.spacing(i);
  const std::size_t others = n / static_cast<std::size_t>(sh[i]);
  std::vector<double> H(static_cast<std::size_t>(sh[i]));
  std::vector<double> buf(others);
  for (int xi = 0; xi < sh[i]; ++xi) {
    std::size_t c = 0;
    for (int a0 = 0; a0 < sh[0]; ++a0) {
      if (i == 0 && a0 != xi) continue;
      for (int a1 = 0; a1 < sh[1]; ++a1) {
        if (i == 1 && a1 != xi) continue;
        for (int a2 = 0; a2 < sh[2]; ++a2) {
          if (i == 2 && a2 != xi) continue;
          buf[c++] = G[a0 * st[0] + a1 * st[1] + a2 * st[2]];
        }
      }
    }
    H[xi] = g.dim == 1 ? buf[0] : lp_reduce(buf.data(), others, 1, nullptr, other_cell, spec.p2);
  }
  return lp_reduce(H.data(), H.size(), 1, nullptr, g.spacing(i), spec.p1);
}

}  // namespace detail

double lebesgue_norm(const SpatialField& f, double p) {
  if (!(p >= 1)) throw std::invalid_argument("lebesgue_norm: p must be in [1, inf]");
  const SpatialField v = f.as_physical();
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(v[i]);
  return detail::lp_reduce(a.data(), a.size(), 1, nullptr, v.grid().cell_volume(), p);
}

NormSpec NormSpec::anisotropic(int axis, double p1, double p2) {
  NormSpec s;
  s.axis = axis;
  s.p1 = p1;
  s.p2 = p2;
  s.pt = p2;
  return s;
}

NormSpec NormSpec::strichartz(double gamma, double r) {
  NormSpec s;
  s.p2 = r;
  s.pt = gamma;
  s.time_outer = true;
  return s;
}

NormSpec NormSpec::spacetime(double p) {
  NormSpec s;
  s.p1 = s.p2 = s.pt = p;
  return s;
}

void NormSpec::validate() const {
  for (double p : {p1, p2, pt})
    if (!(p >= 1)) throw std::invalid_argument("NormSpec: exponents must lie in [1, inf]");
  if (!std::isfinite(s)) throw std::invalid_argument("NormSpec: weight must be finite");
  if (subset == Subset::DominantAxis && axis < 0)
    throw std::invalid_argument("NormSpec: dominant-axis subset needs a privileged axis");
}

namespace {

std::string exp_str(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

std::string NormSpec::label() const {
  std::ostringstream os;
  if (axis >= 0) {
    os << "L^" << exp_str(p1) << "_x" << axis + 1 << " L^" << exp_str(p2) << "_x' L^" << exp_str(pt) << "_t";
  } else if (time_outer) {
    os << "L^" << exp_str(pt) << "_t L^" << exp_str(p2) << "_x";
  } else {
    os << "L^" << exp_str(p2) << "_x L^" << exp_str(pt) << "_t";
  }
  if (s != 0) os << " <k>^" << s;
  if (subset == Subset::DominantAxis) os << " |k_" << axis + 1 << "|=k_max>4";
  return os.str();
}

double mixed_norm(const SpacetimeField& F, const NormSpec& spec) {
  spec.validate();
  return detail::mixed_norm(detail::modulus(F), spec);
}

double NormReport::contribution_sum() const {
  double s = 0;
  for (const auto& [k, v] : contributions) s += v;
  return s;
}

std::string NormReport::to_json(int top) const {
  using nlohmann::json;
  std::vector<std::pair<Index, double>> c(contributions.begin(), contributions.end());
  std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (static_cast<int>(c.size()) > top) c.resize(static_cast<std::size_t>(top));
  json j;
  j["spec"] = spec;
  j["value"] = value;
  j["T"] = horizon;
  j["parts"] = parts;
  json arr = json::array();
  for (const auto& [k, v] : c) arr.push_back({{"k", {k[0], k[1], k[2]}}, {"value", v}});
  j["top_contributions"] = arr;
  return j.dump(2);
}

NormReport modulation_norm(const SpatialField& f, double s, const DecompositionFamily& fam) {
  require_same_space(f.grid(), fam.grid(), "modulation_norm");
  const SpatialField F = f.as_frequency();
  require_band_limited(F, fam, "modulation_norm");
  NormReport rep;
  rep.spec = "M^" + exp_str(s) + "_{2,1}";
  const double cell = std::sqrt(F.grid().cell_volume());
  for (const auto& k : fam.indices()) {
    const double e = box_energy(F, fam, k);
    if (e == 0) continue;
    const double v = std::pow(bracket(k, fam.dim()), s) * cell * std::sqrt(e);
    rep.contributions[k] = v;
    rep.value += v;
  }
  return rep;
}

double besov_norm(const SpatialField& f, double s, const DecompositionFamily& fam) {
  require_same_space(f.grid(), fam.grid(), "besov_norm");
  const SpatialField F = f.as_frequency();
  require_band_limited(F, fam, "besov_norm");
  const GridSpec& g = F.grid();
  std::vector<double> block;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double e = std::norm(F[i]);
    if (e == 0) continue;
    const Point xi = frequency_of(g, i);
    double r2 = 0;
    for (int a = 0; a < g.dim; ++a) r2 += xi[a] * xi[a];
    // Block 0: |xi| <= 1. Block j >= 1: 2^{j-1} < |xi| <= 2^j.
    int j = 0;
    while (r2 > std::ldexp(1.0, 2 * j)) ++j;
    if (block.size() <= static_cast<std::size_t>(j)) block.resize(static_cast<std::size_t>(j) + 1, 0.0);
    block[static_cast<std::size_t>(j)] += e;
  }
  const double cell = std::sqrt(g.cell_volume());
  double v = 0;
  for (std::size_t j = 0; j < block.size(); ++j) v += std::pow(2.0, s * double(j)) * cell * std::sqrt(block[j]);
  return v;
}

double besov_norm(const SpatialField& f, double s) { return besov_norm(f, s, build_family(f.grid())); }

namespace {

std::vector<Index> active_cubes(const std::vector<const SpatialField*>& slices, const DecompositionFamily& fam) {
  double total = 0;
  for (const auto* f : slices) total += f->coefficient_norm() * f->coefficient_norm();
  std::vector<Index> out;
  if (total == 0) return out;
  const double floor2 = kCubeSkip * kCubeSkip * total;
  for (const auto& k : fam.indices()) {
    double e = 0;
    for (const auto* f : slices) e += box_energy(*f, fam, k);
    if (e > floor2) out.push_back(k);
  }
  return out;
}

}  // namespace

namespace detail {

std::vector<Index> active_cubes(const SpacetimeField& F, const DecompositionFamily& fam) {
  std::vector<const SpatialField*> p;
  for (const auto& s : F.slices()) p.push_back(&s);
  return modspec::active_cubes(p, fam);
}

std::vector<Index> active_cubes(const SpatialField& F, const DecompositionFamily& fam) {
  return modspec::active_cubes({&F}, fam);
}

}  // namespace detail

NormReport box_lp_sum(const SpatialField& f, double p, double s, const DecompositionFamily& fam,
                      bool weight_first_axis) {
  require_same_space(f.grid(), fam.grid(), "box_lp_sum");
  const SpatialField F = f.as_frequency();
  const CubeSampler sampler(fam);
  NormReport rep;
  rep.spec = "sum_k <k" + std::string(weight_first_axis ? "_1" : "") + ">^" + exp_str(s) + " ||Box_k f||_" + exp_str(p);
  for (const auto& k : detail::active_cubes(F, fam)) {
    const double w = weight_first_axis ? 1.0 + std::abs(k[0]) : bracket(k, fam.dim());
    const double v = std::pow(w, s) * lebesgue_norm(sampler.sample(F, k), p);
    rep.contributions[k] = v;
    rep.value += v;
  }
  return rep;
}

NormReport box_spacetime_sum(const SpacetimeField& F, const NormSpec& spec, double s,
                             const DecompositionFamily& fam) {
  spec.validate();
  const SpacetimeField G = F.as_frequency();
  const CubeSampler sampler(fam);
  NormReport rep;
  rep.spec = "sum_k <k>^" + exp_str(s) + " ||Box_k F||_{" + spec.label() + "}";
  rep.horizon = F.grid().horizon;
  for (const auto& k : detail::active_cubes(G, fam)) {
    const double v = std::pow(bracket(k, fam.dim()), s) * mixed_norm(sampler.sample(G, k), spec);
    rep.contributions[k] = v;
    rep.value += v;
  }
  return rep;
}

ProductReport product_norm_check(const std::vector<SpatialField>& factors, double s,
                                 const std::vector<double>& exponents, const DecompositionFamily& fam) {
  if (factors.empty()) throw std::invalid_argument("product_norm_check: need at least one factor");
  if (exponents.size() != factors.size() && exponents.size() != factors.size() + 1)
    throw std::invalid_argument("product_norm_check: one exponent per factor (optionally followed by p)");
  double inv = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(exponents[i] >= 1)) throw std::invalid_argument("product_norm_check: exponents must lie in [1, inf]");
    inv += 1.0 / exponents[i];
  }
  if (inv > 1 + 1e-12) throw std::invalid_argument("product_norm_check: sum of 1/p_i exceeds 1");
  const double p = inv == 0 ? kInf : 1.0 / inv;
  if (exponents.size() == factors.size() + 1) {
    const double q = exponents.back();
    const double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
    if (std::abs(qinv - inv) > 1e-12) throw std::invalid_argument("product_norm_check: 1/p != sum 1/p_i");
  }
  SpatialField prod = factors[0].as_physical();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    require_same_space(prod.grid(), factors[i].grid(), "product_norm_check");
    const SpatialField fi = factors[i].as_physical();
    for (std::size_t x = 0; x < prod.size(); ++x) prod[x] *= fi[x];
  }
  ProductReport r;
  r.p = p;
  r.lhs = box_lp_sum(prod, p, s, fam, true).value;
  r.rhs = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) r.rhs *= box_lp_sum(factors[i], exponents[i], s, fam, true).value;
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

}  // namespace modspec
