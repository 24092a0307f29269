#pragma once

#include <string>

#include "modspec/field.hpp"

namespace modspec {

// Fourier multiplier sampled on the frequency lattice.
struct Multiplier {
  GridSpec grid;
  CVector symbol;
  std::string label;

  static Multiplier from_function(const GridSpec& grid, std::string label,
                                  const std::function<cplx(const Point&)>& m);
  static Multiplier constant(const GridSpec& grid, cplx value, std::string label = "constant");
  // Throws if any entry is NaN or infinite.
  void validate() const;
};

// Dispersion relation |xi|^4 + eps |xi|^2.
double dispersion(const Point& xi, int dim, int eps);
// exp(i t omega) with the product t*omega carried in double-double before reduction.
cplx phase(double t, double omega);
// (i xi)^order.
cplx derivative_symbol(double xi, int order);
// |xi|^sigma with the null-plane convention (0 for xi == 0 unless sigma == 0).
double riesz_symbol(double xi, double sigma);

void require_eps(int eps);

SpatialField apply_multiplier(const SpatialField& f, const Multiplier& m);
SpatialField partial_derivative(const SpatialField& f, int axis, int order);
SpatialField riesz_potential(const SpatialField& f, int axis, double sigma);
Multiplier propagator_symbol(double t, int eps, const GridSpec& grid);
SpatialField propagate(const SpatialField& f, double t, int eps);

// Free evolution sampled on the grid's time window: slice m is S(t_m) f (frequency representation).
SpacetimeField free_evolution(const SpatialField& f, int eps, const GridSpec& window);

}  // namespace modspec
