#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace modspec {

inline constexpr int kMaxDim = 3;

struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Periodic box [-L/2, L/2)^dim with N_j samples per axis and a time window [0, T].
struct GridSpec {
  int dim = 2;
  std::array<double, kMaxDim> length{16 * std::numbers::pi, 16 * std::numbers::pi,
                                     16 * std::numbers::pi};
  std::array<int, kMaxDim> points{640, 640, 640};
  double horizon = 1.0;
  int time_steps = 64;

  static GridSpec cube(int dim, double L, int N, double T = 1.0, int steps = 64);

  void validate() const;

  std::size_t size() const;
  double spacing(int axis) const { return length[axis] / points[axis]; }
  double dxi(int axis) const { return 2 * std::numbers::pi / length[axis]; }
  // Largest resolved |xi_axis| (Nyquist).
  double kmax(int axis) const { return points[axis] * std::numbers::pi / length[axis]; }
  double cell_volume() const;
  double volume() const;
  double dt() const { return horizon / time_steps; }
  double time_at(int m) const { return horizon * m / time_steps; }

  // Signed lattice index for storage position i (FFT ordering).
  int freq_index(int axis, int i) const { return i < points[axis] / 2 ? i : i - points[axis]; }
  // Storage position for signed lattice index m (wrapped).
  int freq_slot(int axis, int m) const {
    const int n = points[axis];
    int r = m % n;
    return r < 0 ? r + n : r;
  }
  double wavenumber(int axis, int i) const { return dxi(axis) * freq_index(axis, i); }
  double coordinate(int axis, int i) const { return -length[axis] / 2 + spacing(axis) * i; }

  std::array<int, kMaxDim> shape() const;
  std::array<std::size_t, kMaxDim> strides() const;

  // Same spatial lattice (time window may differ).
  bool same_space(const GridSpec& o) const;
  bool operator==(const GridSpec& o) const;

  // Copy with spatial resolution replaced by M per axis (same lengths).
  GridSpec with_points(int M) const;
  GridSpec with_time(double T, int steps) const;

  std::string describe() const;
};

}  // namespace modspec
