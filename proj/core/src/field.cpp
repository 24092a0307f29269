#include "modspec/field.hpp"

#include <cmath>

namespace modspec {

void require_same_space(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!a.same_space(b)) throw GridError(std::string(what) + ": grid mismatch");
}

SpatialField::SpatialField(GridSpec grid, Representation rep)
    : grid_(grid), rep_(rep), values_(grid.size(), cplx{}) {}

SpatialField::SpatialField(GridSpec grid, Representation rep, CVector values)
    : grid_(grid), rep_(rep), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridError("field: value count does not match grid");
}

SpatialField SpatialField::zeros(const GridSpec& grid, Representation rep) {
  return SpatialField(grid, rep);
}

Point frequency_of(const GridSpec& g, std::size_t flat) {
  Point xi{0, 0, 0};
  const auto st = g.strides();
  for (int a = 0; a < g.dim; ++a) {
    const int i = static_cast<int>((flat / st[a]) % static_cast<std::size_t>(g.points[a]));
    xi[a] = g.wavenumber(a, i);
  }
  return xi;
}

Point coordinate_of(const GridSpec& g, std::size_t flat) {
  Point x{0, 0, 0};
  const auto st = g.strides();
  for (int a = 0; a < g.dim; ++a) {
    const int i = static_cast<int>((flat / st[a]) % static_cast<std::size_t>(g.points[a]));
    x[a] = g.coordinate(a, i);
  }
  return x;
}

SpatialField SpatialField::sample(const GridSpec& grid, const std::function<cplx(const Point&)>& f) {
  SpatialField out(grid, Representation::Physical);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(coordinate_of(grid, i));
  return out;
}

SpatialField SpatialField::spectrum(const GridSpec& grid,
                                    const std::function<cplx(const Point&)>& g) {
  SpatialField out(grid, Representation::Frequency);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g(frequency_of(grid, i));
  return out;
}

SpatialField SpatialField::as_frequency() const {
  return is_frequency() ? *this : forward_transform(*this);
}

SpatialField SpatialField::as_physical() const {
  return is_physical() ? *this : inverse_transform(*this);
}

double SpatialField::coefficient_norm() const {
  double s = 0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

SpatialField forward_transform(const SpatialField& f) {
  if (!f.is_physical()) throw ContractError("forward_transform: input is not in physical space");
  SpatialField out(f.grid(), Representation::Frequency);
  fft::forward_unitary(f.grid().dim, f.grid().shape(), f.data(), out.data());
  return out;
}

SpatialField inverse_transform(const SpatialField& F) {
  if (!F.is_frequency()) throw ContractError("inverse_transform: input is not in frequency space");
  SpatialField out(F.grid(), Representation::Physical);
  fft::inverse_unitary(F.grid().dim, F.grid().shape(), F.data(), out.data());
  return out;
}

namespace {

SpatialField aligned(const SpatialField& b, Representation rep) {
  return rep == Representation::Physical ? b.as_physical() : b.as_frequency();
}

}  // namespace

SpatialField operator+(const SpatialField& a, const SpatialField& b) {
  require_same_space(a.grid(), b.grid(), "field +");
  SpatialField out = a;
  const SpatialField bb = b.representation() == a.representation() ? b : aligned(b, a.representation());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bb[i];
  return out;
}

SpatialField operator-(const SpatialField& a, const SpatialField& b) {
  require_same_space(a.grid(), b.grid(), "field -");
  SpatialField out = a;
  const SpatialField bb = b.representation() == a.representation() ? b : aligned(b, a.representation());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bb[i];
  return out;
}

SpatialField operator*(cplx s, const SpatialField& a) {
  SpatialField out = a;
  for (auto& v : out.values()) v *= s;
  return out;
}

SpatialField conj(const SpatialField& a) {
  SpatialField p = a.as_physical();
  for (auto& v : p.values()) v = std::conj(v);
  return p;
}

SpacetimeField::SpacetimeField(GridSpec grid, std::vector<SpatialField> slices)
    : grid_(grid), slices_(std::move(slices)) {
  if (slices_.size() != static_cast<std::size_t>(grid_.time_steps) + 1)
    throw GridError("spacetime field: slice count must equal time_steps + 1");
  for (const auto& s : slices_) require_same_space(grid_, s.grid(), "spacetime field");
}

SpacetimeField SpacetimeField::zeros(const GridSpec& grid, Representation rep) {
  std::vector<SpatialField> s(static_cast<std::size_t>(grid.time_steps) + 1,
                              SpatialField(grid, rep));
  return SpacetimeField(grid, std::move(s));
}

SpacetimeField SpacetimeField::generate(const GridSpec& grid,
                                        const std::function<SpatialField(int, double)>& make) {
  std::vector<SpatialField> s;
  s.reserve(static_cast<std::size_t>(grid.time_steps) + 1);
  for (int m = 0; m <= grid.time_steps; ++m) s.push_back(make(m, grid.time_at(m)));
  return SpacetimeField(grid, std::move(s));
}

SpacetimeField SpacetimeField::as_frequency() const {
  std::vector<SpatialField> s;
  s.reserve(slices_.size());
  for (const auto& f : slices_) s.push_back(f.as_frequency());
  return SpacetimeField(grid_, std::move(s));
}

SpacetimeField SpacetimeField::as_physical() const {
  std::vector<SpatialField> s;
  s.reserve(slices_.size());
  for (const auto& f : slices_) s.push_back(f.as_physical());
  return SpacetimeField(grid_, std::move(s));
}

namespace {

void require_same_window(const SpacetimeField& a, const SpacetimeField& b) {
  if (!(a.grid() == b.grid())) throw GridError("spacetime arithmetic: grid mismatch");
}

}  // namespace

SpacetimeField operator+(const SpacetimeField& a, const SpacetimeField& b) {
  require_same_window(a, b);
  std::vector<SpatialField> s;
  s.reserve(a.count());
  for (std::size_t m = 0; m < a.count(); ++m) s.push_back(a.slice(m) + b.slice(m));
  return SpacetimeField(a.grid(), std::move(s));
}

SpacetimeField operator-(const SpacetimeField& a, const SpacetimeField& b) {
  require_same_window(a, b);
  std::vector<SpatialField> s;
  s.reserve(a.count());
  for (std::size_t m = 0; m < a.count(); ++m) s.push_back(a.slice(m) - b.slice(m));
  return SpacetimeField(a.grid(), std::move(s));
}

SpacetimeField operator*(cplx c, const SpacetimeField& a) {
  std::vector<SpatialField> s;
  s.reserve(a.count());
  for (const auto& f : a.slices()) s.push_back(c * f);
  return SpacetimeField(a.grid(), std::move(s));
}

}  // namespace modspec
