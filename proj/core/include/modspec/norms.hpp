#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "modspec/decomp.hpp"
#include "modspec/local.hpp"

namespace modspec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double lebesgue_norm(const SpatialField& f, double p);

// Which cubes enter a k-sum.
enum class Subset { All, DominantAxis };

// Mixed anisotropic space-time norm with an optional k-weight <k>^s.
//
// axis >= 0: L^{p1}_{x_axis} L^{p2}_{other x} L^{pt}_t, reduced t first, then the other
// axes, then x_axis. axis < 0 and time_outer: L^{pt}_t L^{p2}_x (space first).
// axis < 0 otherwise: L^{p2}_x L^{pt}_t (time first).
struct NormSpec {
  int axis = -1;
  double p1 = 2;
  double p2 = 2;
  double pt = 2;
  bool time_outer = false;
  double s = 0;
  Subset subset = Subset::All;

  static NormSpec anisotropic(int axis, double p1, double p2);
  static NormSpec strichartz(double gamma, double r);
  static NormSpec spacetime(double p);

  void validate() const;
  std::string label() const;
};

double mixed_norm(const SpacetimeField& F, const NormSpec& spec);

struct NormReport {
  std::string spec;
  double value = 0;
  double horizon = 0;
  std::map<Index, double> contributions;
  std::map<std::string, double> parts;

  // {spec, value, T, parts, top-20 contributions}
  std::string to_json(int top = 20) const;
  double contribution_sum() const;
};

NormReport modulation_norm(const SpatialField& f, double s, const DecompositionFamily& fam);
double besov_norm(const SpatialField& f, double s, const DecompositionFamily& fam);
double besov_norm(const SpatialField& f, double s);

// Sum over cubes of <k>^s ||Box_k f||_{L^p} evaluated on cube-local samples.
NormReport box_lp_sum(const SpatialField& f, double p, double s, const DecompositionFamily& fam,
                      bool weight_first_axis = false);
// Sum over cubes of <k>^s ||Box_k F||_{spec} (the spec's own weight is ignored).
NormReport box_spacetime_sum(const SpacetimeField& F, const NormSpec& spec, double s,
                             const DecompositionFamily& fam);

enum class XVariant { X, X1 };
enum class Evaluation { CubeLocal, FullGrid };

struct XParams {
  double exponent = 0;  // m for X, kappa for X1; must be >= 2
};

NormReport x_norm(const SpacetimeField& u, XVariant variant, const DecompositionFamily& fam,
                  const XParams& params, Evaluation how = Evaluation::CubeLocal);

// Individual building block of the X norms: rho^{(i)}_l(v) for l = 1, 2, 3 where v = m(D) u.
// i is ignored for l = 3.
double x_term(const SpacetimeField& u, int l, int i, double exponent, const DecompositionFamily& fam,
              const PatchSymbol& symbol = {});

struct ProductReport {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double p = 0;
};

// sum_k <k_1>^s ||Box_k(u_1...u_N)||_p against prod_i sum_k <k_1>^s ||Box_k u_i||_{p_i},
// with 1/p = sum 1/p_i.
ProductReport product_norm_check(const std::vector<SpatialField>& factors, double s,
                                 const std::vector<double>& exponents, const DecompositionFamily& fam);

// Fraction of energy below which a cube is skipped in k-sums.
inline constexpr double kCubeSkip = 1e-16;

}  // namespace modspec
