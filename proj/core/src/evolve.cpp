#include <cmath>

#include <fmt/format.h>

#include "modspec/evolution.hpp"

namespace modspec {

namespace {

class InteractionPicture {
 public:
  InteractionPicture(const GridSpec& g, int eps, const NonlinearitySpec& spec, Dealias mode)
      : g_(g), spec_(spec), mode_(mode), omega_(g.size()) {
    for (std::size_t i = 0; i < omega_.size(); ++i) omega_[i] = dispersion(frequency_of(g, i), g.dim, eps);
  }

  // u = S(t) v, both in frequency representation.
  SpatialField lift(double t, const SpatialField& v) const {
    SpatialField u(g_, Representation::Frequency);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = phase(t, omega_[i]) * v[i];
    return u;
  }

  // dv/dt = -i S(-t) F(S(t) v).
  SpatialField rhs(double t, const SpatialField& v) const {
    SpatialField F = evaluate_nonlinearity(lift(t, v), spec_, mode_);
    SpatialField out(g_, Representation::Frequency);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(0, -1) * std::conj(phase(t, omega_[i])) * F[i];
    return out;
  }

 private:
  GridSpec g_;
  const NonlinearitySpec& spec_;
  Dealias mode_;
  std::vector<double> omega_;
};

void axpy(SpatialField& y, cplx a, const SpatialField& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

SpacetimeField evolve(const SpatialField& u0, int eps, const NonlinearitySpec& spec, double T, int steps,
                      int snapshots, Dealias mode, double blowup) {
  require_eps(eps);
  if (!(T > 0) || steps <= 0) throw std::invalid_argument("evolve: need T > 0 and steps > 0");
  if (snapshots == 0) snapshots = steps;
  if (snapshots < 0 || steps % snapshots != 0)
    throw std::invalid_argument(fmt::format("evolve: snapshots {} must divide steps {}", snapshots, steps));
  const GridSpec g = u0.grid().with_time(T, snapshots);
  const InteractionPicture ip(g, eps, spec, mode);
  const double h = T / steps;
  const int stride = steps / snapshots;
  const bool linear = spec.is_zero();
  const double cell = std::sqrt(g.cell_volume());

  SpatialField v = u0.as_frequency();
  std::vector<SpatialField> out;
  out.reserve(snapshots + 1);
  out.push_back(v);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    if (!linear) {
      const SpatialField k1 = ip.rhs(t, v);
      SpatialField w = v;
      axpy(w, 0.5 * h, k1);
      const SpatialField k2 = ip.rhs(t + 0.5 * h, w);
      w = v;
      axpy(w, 0.5 * h, k2);
      const SpatialField k3 = ip.rhs(t + 0.5 * h, w);
      w = v;
      axpy(w, h, k3);
      const SpatialField k4 = ip.rhs(t + h, w);
      axpy(v, h / 6, k1);
      axpy(v, h / 3, k2);
      axpy(v, h / 3, k3);
      axpy(v, h / 6, k4);
      const double mass = v.coefficient_norm() * cell;
      if (!std::isfinite(mass) || mass > blowup)
        throw BlowUpError(fmt::format("evolve: L2 norm {:.3e} exceeds {:.1e} at t = {:.6g}", mass, blowup, t + h));
    }
    if ((s + 1) % stride == 0) {
      const int m = (s + 1) / stride;
      out.push_back(ip.lift(g.time_at(m), v));
    }
  }
  return SpacetimeField(g, std::move(out));
}

}  // namespace modspec
