#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "modspec/field.hpp"
#include "modspec/multiplier.hpp"

namespace modspec {

// Cube index k in Z^n; entries beyond dim are zero.
using Index = std::array<int, kMaxDim>;

// C-infinity transition: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);
// Bump: 1 on |s| <= 1/2, 0 on |s| >= 1.
double rho(double s);
// eta_k(s) = rho(s - k) / sum_l rho(s - l).
double eta(int k, double s);
// Cutoff on [0, inf): 1 on [0, 1], 0 on [2, inf).
double psi(double x);

double bracket(const Index& k, int dim);  // <k> = 1 + |k|
int kmax_of(const Index& k, int dim);     // max_l |k_l|

// One-dimensional factor of sigma_k: eta_k sampled at lattice indices lo .. lo + w.size() - 1.
struct AxisSupport {
  int lo = 0;
  std::vector<double> w;
  int hi() const { return lo + static_cast<int>(w.size()) - 1; }
};

class DecompositionFamily {
 public:
  explicit DecompositionFamily(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  // Largest |k_i| in the resolved set on this axis.
  int edge(int axis) const { return edge_[axis]; }
  bool contains(const Index& k) const;
  std::vector<Index> indices() const;
  std::size_t size() const;

  const AxisSupport& axis_support(int axis, int k) const;
  // Lattice index of the frequency lattice point nearest to the cube centre.
  int centre_index(int axis, int k) const;
  // sigma_k(xi) evaluated from the profile.
  double sigma(const Index& k, const Point& xi) const;
  // Realized lower bound of sigma_k on the closed unit cube Q_k.
  double realized_c() const;
  // Frequencies with |xi_i| <= edge(i) on every axis form the interior band.
  bool in_interior(const Point& xi) const;

 private:
  GridSpec grid_;
  std::array<int, kMaxDim> edge_{0, 0, 0};
  std::array<std::vector<AxisSupport>, kMaxDim> support_;
};

DecompositionFamily build_family(const GridSpec& grid);

void require_member(const DecompositionFamily& fam, const Index& k, const char* what);

SpatialField box_project(const SpatialField& f, const DecompositionFamily& fam, const Index& k);
SpacetimeField box_project(const SpacetimeField& F, const DecompositionFamily& fam, const Index& k);

// sum over the patch of sigma_k^2 |c|^2 (coefficients must be in frequency space).
double box_energy(const SpatialField& F, const DecompositionFamily& fam, const Index& k);

// Squared-L2 fraction of f outside the interior band.
double band_leakage(const SpatialField& f, const DecompositionFamily& fam);
void require_band_limited(const SpatialField& f, const DecompositionFamily& fam, const char* what,
                          double tol = 1e-10);

struct OrthogonalityReport {
  int measured_c = 0;                 // smallest |k - k1 - k2|_inf beyond which products vanish
  std::vector<double> max_residual;   // indexed by offset d
  int samples = 0;
};

OrthogonalityReport almost_orthogonality_check(const DecompositionFamily& fam, int samples,
                                               std::uint64_t seed, int max_offset = 6,
                                               double threshold = 1e-13);

double ratio_symbol(const Point& xi, int i, int j, int variant);

struct RatioCutoff {
  int i = 0;
  int j = 1;
  int variant = 1;
  Multiplier symbol;
};

RatioCutoff make_ratio_cutoff(const GridSpec& grid, int i, int j, int variant);
SpatialField ratio_project(const SpatialField& f, int i, int j, int variant);
SpacetimeField ratio_project(const SpacetimeField& F, int i, int j, int variant);

// CSV rows: k_1..k_n, offset_1..offset_n (lattice offset from the cube centre), sigma.
void dump_family_csv(const DecompositionFamily& fam, std::ostream& os,
                     const std::vector<Index>& subset = {});

}  // namespace modspec
