#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "modspec/evolution.hpp"

namespace modspec {

namespace {

SpacetimeField slice_map(const SpacetimeField& a, const std::function<SpatialField(int)>& fn) {
  std::vector<SpatialField> s;
  s.reserve(a.count());
  for (int m = 0; m <= a.grid().time_steps; ++m) s.push_back(fn(m));
  return SpacetimeField(a.grid(), std::move(s));
}

}  // namespace

std::string PicardRun::to_json() const {
  nlohmann::json j;
  j["config"] = {{"eps", eps},
                 {"nonlinearity", spec.describe()},
                 {"T", window.horizon},
                 {"time_steps", window.time_steps},
                 {"grid", window.describe()},
                 {"iterates", iterates},
                 {"dealias", dealias == Dealias::Truncation ? "truncation" : "padding"},
                 {"divergence_threshold", divergence_threshold}};
  j["norm"] = norm_label;
  j["x_norms"] = x_norms;
  j["differences"] = differences;
  j["ratios"] = ratios;
  j["contraction"] = contraction;
  j["status"] = status;
  j["warnings"] = warnings;
  return j.dump(2);
}

PicardRun picard_iterate(PicardRun run, SpacetimeField* last_iterate) {
  if (run.iterates < 3) throw std::invalid_argument("picard_iterate: need at least 3 iterates");
  require_eps(run.eps);
  const GridSpec& w = run.window;
  require_same_space(run.u0.grid(), w, "picard_iterate");
  run.warnings = run.spec.validate(w.dim);
  const DecompositionFamily fam(w);
  XVariant variant = XVariant::X;
  XParams xp;
  if (run.spec.form == NonlinearityForm::Simple) {
    variant = XVariant::X1;
    xp.exponent = run.spec.kappa.empty() ? 2 : *std::min_element(run.spec.kappa.begin(), run.spec.kappa.end());
    run.norm_label = "X1(kappa=" + std::to_string(static_cast<int>(xp.exponent)) + ")";
  } else {
    xp.exponent = run.spec.m;
    run.norm_label = "X(m=" + std::to_string(run.spec.m) + ")";
  }
  xp.exponent = std::max(xp.exponent, 2.0);
  auto norm = [&](const SpacetimeField& f) { return x_norm(f, variant, fam, xp).value; };
  auto bad = [&](double v) { return !std::isfinite(v) || v > run.divergence_threshold; };

  run.x_norms.clear();
  run.differences.clear();
  run.ratios.clear();
  run.status = "pending";

  SpacetimeField u = free_evolution(run.u0, run.eps, w);
  run.x_norms.push_back(norm(u));
  SpacetimeField u_prev, delta_prev;
  bool diverged = bad(run.x_norms.back());
  const cplx mi(0, -1);
  for (int j = 0; j < run.iterates && !diverged; ++j) {
    SpacetimeField F = j == 0
        ? slice_map(u, [&](int m) { return evaluate_nonlinearity(u.slice(m), run.spec, run.dealias); })
        : slice_map(u, [&](int m) {
            return evaluate_difference(u.slice(m), u_prev.slice(m), delta_prev.slice(m), run.spec, run.dealias);
          });
    SpacetimeField delta = mi * duhamel(F, run.eps);
    F = SpacetimeField();
    run.differences.push_back(norm(delta));
    SpacetimeField next = u + delta;
    run.x_norms.push_back(norm(next));
    diverged = bad(run.differences.back()) || bad(run.x_norms.back());
    u_prev = std::move(u);
    u = std::move(next);
    delta_prev = std::move(delta);
  }
  for (std::size_t j = 0; j + 1 < run.differences.size(); ++j) {
    const double a = run.differences[j], b = run.differences[j + 1];
    run.ratios.push_back(a > 0 ? b / a : (b > 0 ? kInf : 0.0));
  }
  if (diverged) {
    run.status = "diverged";
    run.contraction = false;
  } else {
    // ratios[j] = d_{j+1} / d_j; early ratios are transient and skipped.
    const std::size_t first = run.ratios.size() >= 3 ? 2 : 1;
    bool ok = true;
    for (std::size_t j = first; j < run.ratios.size(); ++j)
      if (!(run.ratios[j] <= 0.5)) ok = false;
    run.contraction = ok;
    run.status = ok ? "contraction" : "no-contraction";
  }
  if (last_iterate) *last_iterate = std::move(u);
  return run;
}

}  // namespace modspec
