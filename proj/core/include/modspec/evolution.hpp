#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "modspec/decomp.hpp"
#include "modspec/multiplier.hpp"
#include "modspec/norms.hpp"

namespace modspec {

enum class NonlinearityForm { Simple, General };

// One factor d^alpha u, or d^alpha conj(u) when conjugate is set.
struct Factor {
  std::array<int, kMaxDim> alpha{0, 0, 0};
  bool conjugate = false;
  int order() const { return alpha[0] + alpha[1] + alpha[2]; }
};

struct Monomial {
  cplx coeff{1, 0};
  std::vector<Factor> factors;
};

struct NonlinearitySpec {
  NonlinearityForm form = NonlinearityForm::Simple;
  // Simple: sum_i lambda_i d^3_{x_i} (u^{kappa_i + 1}).
  std::vector<cplx> lambda;
  std::vector<int> kappa;
  // General: sum of monomials with degrees in [m + 1, M + 1].
  std::vector<Monomial> terms;
  int m = 2;
  int M = 2;
  // Hypothesis violations throw when strict, otherwise they are reported as warnings.
  bool strict = true;

  static NonlinearitySpec simple(std::vector<cplx> lambda, std::vector<int> kappa, bool strict = true);
  static NonlinearitySpec general(std::vector<Monomial> terms, int m, int M, bool strict = true);

  int max_degree() const;
  bool is_zero() const;
  // Throws std::invalid_argument in strict mode; returns warnings otherwise (and always
  // returns the m versus 2 + 8/n discrepancy note when it applies).
  std::vector<std::string> validate(int dim) const;
  // Term set closed under conjugation with conjugated coefficients.
  bool conjugation_symmetric() const;
  std::string describe() const;
};

enum class Dealias { Truncation, Padding };

// Per-axis retained cutoff 2 K_max / (d + 1) for a degree-d product.
double dealias_cutoff(const GridSpec& g, int axis, int degree);

// F evaluated pseudo-spectrally; result in frequency representation.
SpatialField evaluate_nonlinearity(const SpatialField& u, const NonlinearitySpec& spec,
                                   Dealias mode = Dealias::Truncation);
// F(u) - F(v) assembled from the exact difference delta = u - v by telescoping, so
// tiny differences keep full relative precision.
SpatialField evaluate_difference(const SpatialField& u, const SpatialField& v, const SpatialField& delta,
                                 const NonlinearitySpec& spec, Dealias mode = Dealias::Truncation);

// A f(t_m) = int_0^{t_m} S(t_m - tau) f(tau) dtau with the piecewise-linear interpolant of f
// integrated exactly against the oscillatory kernel. Frequency representation.
SpacetimeField duhamel(const SpacetimeField& f, int eps);

struct PicardRun {
  // Inputs.
  SpatialField u0;
  int eps = 1;
  NonlinearitySpec spec;
  GridSpec window;
  int iterates = 5;
  Dealias dealias = Dealias::Truncation;
  double divergence_threshold = 1e6;
  // Outputs.
  std::vector<double> x_norms;      // X norm of u_j, j = 0..
  std::vector<double> differences;  // d_j = X norm of u_{j+1} - u_j
  std::vector<double> ratios;       // d_{j+1} / d_j
  bool contraction = false;
  std::string status = "pending";   // contraction | no-contraction | diverged
  std::string norm_label;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

PicardRun picard_iterate(PicardRun run, SpacetimeField* last_iterate = nullptr);

struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Interaction-picture RK4. Returns snapshots at `snapshots` + 1 equally spaced times
// (snapshots must divide steps; 0 means every step).
SpacetimeField evolve(const SpatialField& u0, int eps, const NonlinearitySpec& spec, double T, int steps,
                      int snapshots = 0, Dealias mode = Dealias::Truncation, double blowup = 1e6);

}  // namespace modspec
