#pragma once

#include <functional>

#include "modspec/decomp.hpp"

namespace modspec {

// Extra Fourier symbol applied inside a cube patch; empty means identity.
using PatchSymbol = std::function<cplx(const Point&)>;

// Evaluates Box_k-localized fields on a coarse grid of M_j | N_j points per axis.
//
// The patch of sigma_k F is shifted by the lattice index nearest to k and inverse
// transformed at size M. Coarse nodes are every (N/M)-th fine node, so the returned
// samples coincide with the fine-grid values of Box_k f at those nodes.
class CubeSampler {
 public:
  explicit CubeSampler(const DecompositionFamily& fam, int oversample = 8);

  const DecompositionFamily& family() const { return *fam_; }
  int coarse_points(int axis = 0) const { return M_[axis]; }
  const GridSpec& coarse_grid() const { return coarse_; }

  // F in frequency representation on the family grid.
  SpatialField sample(const SpatialField& F, const Index& k, const PatchSymbol& m = {}) const;
  SpacetimeField sample(const SpacetimeField& F, const Index& k, const PatchSymbol& m = {}) const;
  // Box_k m(D) S(t) f on the given window, computed from the coefficients of f.
  SpacetimeField sample_free(const SpatialField& F, const Index& k, int eps, const GridSpec& window,
                             const PatchSymbol& m = {}) const;

 private:
  struct Node {
    std::size_t fine;
    std::size_t coarse;
    double weight;
    Point xi;
  };
  std::vector<Node> patch(const Index& k) const;
  SpatialField finish(CVector& buf, const GridSpec& grid, const Index& k) const;

  const DecompositionFamily* fam_;
  std::array<int, kMaxDim> M_{1, 1, 1};
  GridSpec coarse_;
};

}  // namespace modspec
