#include "modspec/grid.hpp"

#include <cmath>
#include <sstream>

namespace modspec {

GridSpec GridSpec::cube(int dim, double L, int N, double T, int steps) {
  GridSpec g;
  g.dim = dim;
  g.length = {L, L, L};
  g.points = {N, N, N};
  g.horizon = T;
  g.time_steps = steps;
  return g;
}

void GridSpec::validate() const {
  if (dim < 1 || dim > kMaxDim) throw GridError("grid: dim must be in 1..3");
  for (int a = 0; a < dim; ++a) {
    if (!(length[a] > 0) || !std::isfinite(length[a]))
      throw GridError("grid: box length must be positive on axis " + std::to_string(a));
    if (points[a] <= 0 || points[a] % 2 != 0)
      throw GridError("grid: points per axis must be even and positive on axis " +
                      std::to_string(a));
    // Four lattice frequencies per unit cube: 2*pi/L <= 1/4.
    if (dxi(a) > 0.25 * (1 + 1e-12))
      throw GridError("grid: frequency spacing 2*pi/L exceeds 1/4 on axis " + std::to_string(a));
  }
  if (!(horizon > 0) || !std::isfinite(horizon)) throw GridError("grid: horizon must be positive");
  if (time_steps <= 0) throw GridError("grid: time_steps must be positive");
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points[a]);
  return n;
}

double GridSpec::cell_volume() const {
  double v = 1;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

double GridSpec::volume() const {
  double v = 1;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

std::array<int, kMaxDim> GridSpec::shape() const {
  std::array<int, kMaxDim> s{1, 1, 1};
  for (int a = 0; a < dim; ++a) s[a] = points[a];
  return s;
}

std::array<std::size_t, kMaxDim> GridSpec::strides() const {
  const auto s = shape();
  return {static_cast<std::size_t>(s[1]) * s[2], static_cast<std::size_t>(s[2]), 1};
}

bool GridSpec::same_space(const GridSpec& o) const {
  if (dim != o.dim) return false;
  for (int a = 0; a < dim; ++a)
    if (points[a] != o.points[a] || length[a] != o.length[a]) return false;
  return true;
}

bool GridSpec::operator==(const GridSpec& o) const {
  return same_space(o) && horizon == o.horizon && time_steps == o.time_steps;
}

GridSpec GridSpec::with_points(int M) const {
  GridSpec g = *this;
  for (int a = 0; a < dim; ++a) g.points[a] = M;
  return g;
}

GridSpec GridSpec::with_time(double T, int steps) const {
  GridSpec g = *this;
  g.horizon = T;
  g.time_steps = steps;
  return g;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "dim=" << dim << " N=";
  for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << points[a];
  os << " L=";
  for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << length[a];
  os << " T=" << horizon << " steps=" << time_steps;
  return os.str();
}

}  // namespace modspec
