#pragma once

#include <vector>

#include "modspec/norms.hpp"

namespace modspec::detail {

// |F| laid out as [slice][flat space index].
struct Modulus {
  GridSpec grid;
  int slices = 0;
  std::vector<double> a;
};

Modulus modulus(const SpacetimeField& F);
double mixed_norm(const Modulus& A, const NormSpec& spec);
// (sum_i w_i v_i^p)^(1/p) with a max-scaling guard; p = inf gives max v_i.
double lp_reduce(const double* v, std::size_t n, std::size_t stride, const double* w, double wconst,
                 double p);
std::vector<double> trapezoid_weights(const GridSpec& g);

}  // namespace modspec::detail

namespace modspec::detail {

std::vector<Index> active_cubes(const SpacetimeField& F, const DecompositionFamily& fam);
std::vector<Index> active_cubes(const SpatialField& F, const DecompositionFamily& fam);

// Contribution of cube k to rho^{(i)}_l given |Box_k m(D) u| (i ignored for l = 3).
double rho_cube(const Modulus& A, const Index& k, int l, int i, int dim, double exponent);

}  // namespace modspec::detail
