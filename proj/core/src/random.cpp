#include "modspec/random.hpp"

#include <cmath>

namespace modspec {

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) * std::sqrt(0.5);
}

SpatialField random_spectrum(const GridSpec& grid, Rng& rng,
                             const std::function<double(const Point&)>& weight) {
  SpatialField F(grid, Representation::Frequency);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = weight(frequency_of(grid, i));
    // Draw unconditionally so the stream does not depend on the weight's support.
    const cplx z = rng.complex_normal();
    F[i] = w * z;
  }
  return F;
}

SpatialField random_box_field(const DecompositionFamily& fam, const Index& k, Rng& rng) {
  require_member(fam, k, "random_box_field");
  return random_spectrum(fam.grid(), rng, [&](const Point& xi) { return fam.sigma(k, xi); });
}

SpatialField random_ball_field(const GridSpec& grid, Rng& rng, double radius, const Point& centre) {
  return random_spectrum(grid, rng, [&](const Point& xi) {
    double r2 = 0;
    for (int a = 0; a < grid.dim; ++a) r2 += (xi[a] - centre[a]) * (xi[a] - centre[a]);
    return r2 <= radius * radius ? 1.0 : 0.0;
  });
}

SpatialField gaussian(const GridSpec& grid, double width, double amplitude, const Point& centre) {
  return SpatialField::sample(grid, [&](const Point& x) {
    double r2 = 0;
    for (int a = 0; a < grid.dim; ++a) r2 += (x[a] - centre[a]) * (x[a] - centre[a]);
    return cplx(amplitude * std::exp(-r2 / (2 * width * width)));
  });
}

}  // namespace modspec
