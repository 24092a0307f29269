#include "modspec/multiplier.hpp"

#include <cmath>

namespace modspec {

namespace {

// Multiplies the coefficients of f (brought to frequency space) by m(flat index, xi).
template <class Fn>
SpatialField map_frequency(const SpatialField& f, Fn&& m) {
  SpatialField F = f.as_frequency();
  const GridSpec& g = F.grid();
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= m(i, frequency_of(g, i));
  return f.is_physical() ? inverse_transform(F) : F;
}

void require_axis(const GridSpec& g, int axis, const char* what) {
  if (axis < 0 || axis >= g.dim) throw std::out_of_range(std::string(what) + ": axis out of range");
}

}  // namespace

Multiplier Multiplier::from_function(const GridSpec& grid, std::string label,
                                     const std::function<cplx(const Point&)>& m) {
  Multiplier out{grid, CVector(grid.size()), std::move(label)};
  for (std::size_t i = 0; i < out.symbol.size(); ++i) out.symbol[i] = m(frequency_of(grid, i));
  out.validate();
  return out;
}

Multiplier Multiplier::constant(const GridSpec& grid, cplx value, std::string label) {
  Multiplier out{grid, CVector(grid.size(), value), std::move(label)};
  out.validate();
  return out;
}

void Multiplier::validate() const {
  if (symbol.size() != grid.size()) throw GridError("multiplier: symbol size does not match grid");
  for (const auto& v : symbol)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("multiplier '" + label + "': non-finite entry");
}

void require_eps(int eps) {
  if (eps != 0 && eps != 1) throw std::invalid_argument("eps must be 0 or 1");
}

double dispersion(const Point& xi, int dim, int eps) {
  double r2 = 0;
  for (int a = 0; a < dim; ++a) r2 += xi[a] * xi[a];
  return r2 * r2 + eps * r2;
}

cplx phase(double t, double omega) {
  const double p = t * omega;
  const double e = std::fma(t, omega, -p);
  return std::polar(1.0, p) * cplx(std::cos(e), std::sin(e));
}

cplx derivative_symbol(double xi, int order) {
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return ipow[order % 4] * std::pow(xi, order);
}

double riesz_symbol(double xi, double sigma) {
  if (sigma == 0) return 1.0;
  if (xi == 0) return 0.0;
  return std::pow(std::abs(xi), sigma);
}

SpatialField apply_multiplier(const SpatialField& f, const Multiplier& m) {
  require_same_space(f.grid(), m.grid, "apply_multiplier");
  return map_frequency(f, [&](std::size_t i, const Point&) { return m.symbol[i]; });
}

SpatialField partial_derivative(const SpatialField& f, int axis, int order) {
  require_axis(f.grid(), axis, "partial_derivative");
  if (order < 0) throw std::invalid_argument("partial_derivative: order must be >= 0");
  if (order == 0) return f;
  return map_frequency(f, [&](std::size_t, const Point& xi) { return derivative_symbol(xi[axis], order); });
}

SpatialField riesz_potential(const SpatialField& f, int axis, double sigma) {
  require_axis(f.grid(), axis, "riesz_potential");
  if (sigma == 0) return f;
  return map_frequency(f, [&](std::size_t, const Point& xi) { return cplx(riesz_symbol(xi[axis], sigma)); });
}

Multiplier propagator_symbol(double t, int eps, const GridSpec& grid) {
  require_eps(eps);
  const int d = grid.dim;
  return Multiplier::from_function(grid, "S(t)", [&](const Point& xi) {
    return phase(t, dispersion(xi, d, eps));
  });
}

SpatialField propagate(const SpatialField& f, double t, int eps) {
  require_eps(eps);
  if (t == 0) return f;
  const int d = f.grid().dim;
  return map_frequency(f, [&](std::size_t, const Point& xi) { return phase(t, dispersion(xi, d, eps)); });
}

SpacetimeField free_evolution(const SpatialField& f, int eps, const GridSpec& window) {
  require_same_space(f.grid(), window, "free_evolution");
  require_eps(eps);
  const SpatialField F = f.as_frequency();
  std::vector<double> omega(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) omega[i] = dispersion(frequency_of(window, i), window.dim, eps);
  return SpacetimeField::generate(window, [&](int, double t) {
    SpatialField s(window, Representation::Frequency);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = F[i] * phase(t, omega[i]);
    return s;
  });
}

}  // namespace modspec
