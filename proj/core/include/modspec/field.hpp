#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "modspec/fft.hpp"
#include "modspec/grid.hpp"

namespace modspec {

enum class Representation : std::uint8_t { Physical = 0, Frequency = 1 };

using Point = std::array<double, kMaxDim>;

// Complex samples on the space grid, either in physical space or as unitary DFT coefficients.
class SpatialField {
 public:
  SpatialField() = default;
  SpatialField(GridSpec grid, Representation rep);
  SpatialField(GridSpec grid, Representation rep, CVector values);

  static SpatialField zeros(const GridSpec& grid, Representation rep = Representation::Physical);
  // Samples f(x) at grid coordinates.
  static SpatialField sample(const GridSpec& grid, const std::function<cplx(const Point&)>& f);
  // Coefficients g(xi) at lattice frequencies.
  static SpatialField spectrum(const GridSpec& grid, const std::function<cplx(const Point&)>& g);

  const GridSpec& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::Physical; }
  bool is_frequency() const { return rep_ == Representation::Frequency; }
  std::size_t size() const { return values_.size(); }

  const CVector& values() const { return values_; }
  CVector& values() { return values_; }
  const cplx* data() const { return values_.data(); }
  cplx* data() { return values_.data(); }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  // Converting copies; no-op copy when already in the requested representation.
  SpatialField as_frequency() const;
  SpatialField as_physical() const;

  // sqrt(sum |c|^2) over the stored array (no cell volume).
  double coefficient_norm() const;

 private:
  GridSpec grid_{};
  Representation rep_ = Representation::Physical;
  CVector values_;
};

SpatialField forward_transform(const SpatialField& f);
SpatialField inverse_transform(const SpatialField& F);

// Linear combinations; operands are brought to the representation of the first.
SpatialField operator+(const SpatialField& a, const SpatialField& b);
SpatialField operator-(const SpatialField& a, const SpatialField& b);
SpatialField operator*(cplx s, const SpatialField& a);
SpatialField conj(const SpatialField& a);

void require_same_space(const GridSpec& a, const GridSpec& b, const char* what);

// Ordered slices at t_m = m * T / steps, m = 0..steps.
class SpacetimeField {
 public:
  SpacetimeField() = default;
  SpacetimeField(GridSpec grid, std::vector<SpatialField> slices);

  static SpacetimeField zeros(const GridSpec& grid, Representation rep = Representation::Physical);
  static SpacetimeField generate(const GridSpec& grid,
                                 const std::function<SpatialField(int, double)>& make);

  const GridSpec& grid() const { return grid_; }
  int steps() const { return grid_.time_steps; }
  std::size_t count() const { return slices_.size(); }
  double time(int m) const { return grid_.time_at(m); }
  const SpatialField& slice(int m) const { return slices_[m]; }
  SpatialField& slice(int m) { return slices_[m]; }
  const std::vector<SpatialField>& slices() const { return slices_; }

  SpacetimeField as_frequency() const;
  SpacetimeField as_physical() const;

 private:
  GridSpec grid_{};
  std::vector<SpatialField> slices_;
};

SpacetimeField operator+(const SpacetimeField& a, const SpacetimeField& b);
SpacetimeField operator-(const SpacetimeField& a, const SpacetimeField& b);
SpacetimeField operator*(cplx s, const SpacetimeField& a);

// Lattice frequency vector for flat index i (zero beyond dim).
Point frequency_of(const GridSpec& g, std::size_t flat);
// Physical coordinate for flat index i.
Point coordinate_of(const GridSpec& g, std::size_t flat);

}  // namespace modspec
