#include <algorithm>
#include <cmath>

#include "modspec/multiplier.hpp"
#include "modspec/norms.hpp"
#include "norms_internal.hpp"

namespace modspec {

namespace {

struct Derivative {
  PatchSymbol symbol;
  double multiplicity;
};

// rho_1 + rho_2 + rho_3 contributions of one cube, given |Box_k m(D) u|.
struct Terms {
  double t1 = 0, t2 = 0, t3 = 0;
};

Terms cube_terms(const detail::Modulus& A, const Index& k, int dim, double m, bool want1, bool want2,
                 bool want3) {
  Terms t;
  const double br = bracket(k, dim);
  const int km = kmax_of(k, dim);
  for (int i = 0; i < dim; ++i) {
    if (want1 && std::abs(k[i]) == km && km > 4)
      t.t1 += std::pow(1.0 + std::abs(k[i]), 3) * detail::mixed_norm(A, NormSpec::anisotropic(i, kInf, 2));
    if (want2) t.t2 += std::pow(br, 1.5 - 3.0 / m) * detail::mixed_norm(A, NormSpec::anisotropic(i, m, kInf));
  }
  if (want3)
    t.t3 = std::pow(br, 1.5) * std::max(detail::mixed_norm(A, NormSpec::strichartz(kInf, 2)),
                                        detail::mixed_norm(A, NormSpec::spacetime(2 + m)));
  return t;
}

detail::Modulus cube_modulus(const SpacetimeField& U, const Index& k, const DecompositionFamily& fam,
                             const CubeSampler& sampler, const PatchSymbol& sym, Evaluation how) {
  if (how == Evaluation::CubeLocal) return detail::modulus(sampler.sample(U, k, sym));
  std::vector<SpatialField> s;
  s.reserve(U.count());
  for (const auto& f : U.slices()) {
    SpatialField b = box_project(f, fam, k);
    if (sym)
      for (std::size_t n = 0; n < b.size(); ++n) b[n] *= sym(frequency_of(b.grid(), n));
    s.push_back(inverse_transform(b));
  }
  return detail::modulus(SpacetimeField(U.grid(), std::move(s)));
}

void require_exponent(double m) {
  if (!(m >= 2)) throw std::invalid_argument("x_norm: exponent (m or kappa) must be >= 2");
}

}  // namespace

namespace detail {

double rho_cube(const Modulus& A, const Index& k, int l, int i, int dim, double exponent) {
  const int km = kmax_of(k, dim);
  if (l == 1) {
    if (!(std::abs(k[i]) == km && km > 4)) return 0;
    return std::pow(1.0 + std::abs(k[i]), 3) * mixed_norm(A, NormSpec::anisotropic(i, kInf, 2));
  }
  if (l == 2) return std::pow(bracket(k, dim), 1.5 - 3.0 / exponent) * mixed_norm(A, NormSpec::anisotropic(i, exponent, kInf));
  return cube_terms(A, k, dim, exponent, false, false, true).t3;
}

}  // namespace detail

double x_term(const SpacetimeField& u, int l, int i, double exponent, const DecompositionFamily& fam,
              const PatchSymbol& symbol) {
  require_exponent(exponent);
  if (l < 1 || l > 3) throw std::invalid_argument("x_term: l must be 1, 2 or 3");
  const int d = fam.dim();
  if (l != 3 && (i < 0 || i >= d)) throw std::out_of_range("x_term: axis out of range");
  const SpacetimeField U = u.as_frequency();
  const CubeSampler sampler(fam);
  double v = 0;
  for (const auto& k : detail::active_cubes(U, fam)) {
    if (l == 1 && !(std::abs(k[i]) == kmax_of(k, d) && kmax_of(k, d) > 4)) continue;
    v += detail::rho_cube(cube_modulus(U, k, fam, sampler, symbol, Evaluation::CubeLocal), k, l, i, d, exponent);
  }
  return v;
}

NormReport x_norm(const SpacetimeField& u, XVariant variant, const DecompositionFamily& fam,
                  const XParams& params, Evaluation how) {
  require_exponent(params.exponent);
  require_same_space(u.grid(), fam.grid(), "x_norm");
  const int d = fam.dim();
  const double m = params.exponent;
  const SpacetimeField U = u.as_frequency();
  const CubeSampler sampler(fam);

  std::vector<Derivative> ders;
  if (variant == XVariant::X1) {
    ders.push_back({{}, 1.0});
  } else {
    // alpha = 0 repeats once per l in the double sum over (i, l).
    ders.push_back({{}, static_cast<double>(d)});
    for (int l = 0; l < d; ++l)
      ders.push_back({[l](const Point& xi) { return derivative_symbol(xi[l], 3); }, 1.0});
  }

  NormReport rep;
  rep.spec = variant == XVariant::X1 ? "X1(kappa=" + std::to_string(m) + ")" : "X(m=" + std::to_string(m) + ")";
  rep.horizon = u.grid().horizon;
  double s1 = 0, s2 = 0, s3 = 0;
  for (const auto& k : detail::active_cubes(U, fam)) {
    double c = 0;
    for (const auto& der : ders) {
      const auto A = cube_modulus(U, k, fam, sampler, der.symbol, how);
      const Terms t = cube_terms(A, k, d, m, true, true, true);
      s1 += der.multiplicity * t.t1;
      s2 += der.multiplicity * t.t2;
      s3 += der.multiplicity * t.t3;
      c += der.multiplicity * (t.t1 + t.t2 + t.t3);
    }
    rep.contributions[k] = c;
  }
  rep.parts = {{"smoothing", s1}, {"maximal", s2}, {"strichartz", s3}};
  rep.value = s1 + s2 + s3;
  return rep;
}

}  // namespace modspec
