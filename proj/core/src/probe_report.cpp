#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "modspec/probes.hpp"
#include "probes_internal.hpp"

namespace modspec {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unstable: return "unstable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "fail";
}

double Params::get(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return fallback;
  if (it->second.size() != 1) throw std::invalid_argument("parameter '" + key + "' must be a scalar");
  return it->second.front();
}

std::vector<double> Params::list(const std::string& key, std::vector<double> fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Sensitivity::drift() const {
  return std::abs(value_2L - value_L) / std::max(std::abs(value_L), 1e-300);
}

namespace {

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string ProbeReport::to_json(bool with_timestamp) const {
  nlohmann::ordered_json j;
  j["probe"] = name;
  j["kind"] = kind;
  j["estimate"] = estimate;
  j["quantity"] = quantity;
  j["verdict"] = to_string(verdict);
  j["theoretical"] = number(theoretical);
  j["measured"] = number(measured);
  j["tolerance"] = number(tolerance);
  if (fit) {
    j["fit"] = {{"slope", number(fit->slope)}, {"intercept", number(fit->intercept)},
                {"r2", number(fit->r2)}, {"points", fit->points}};
  }
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    for (std::size_t c = 0; c < columns.size() && c < r.params.size(); ++c) row[columns[c]] = number(r.params[c]);
    row["measured"] = number(r.measured);
    row["theoretical"] = number(r.theoretical);
    sweep.push_back(row);
  }
  j["sweep"] = sweep;
  j["sensitivity"] = {{"evaluated", sensitivity.evaluated},
                      {"value_L", number(sensitivity.value_L)},
                      {"value_2L", number(sensitivity.value_2L)},
                      {"pass_L", sensitivity.pass_L},
                      {"pass_2L", sensitivity.pass_2L},
                      {"drift", number(sensitivity.evaluated ? sensitivity.drift() : NAN)}};
  nlohmann::ordered_json g;
  g["dim"] = grid.dim;
  g["L"] = std::vector<double>(grid.length.begin(), grid.length.begin() + grid.dim);
  g["N"] = std::vector<int>(grid.points.begin(), grid.points.begin() + grid.dim);
  g["T"] = grid.horizon;
  g["steps"] = grid.time_steps;
  j["grid"] = g;
  j["seed"] = seed;
  nlohmann::ordered_json m;
  for (const auto& [k, v] : metrics) m[k] = number(v);
  j["metrics"] = m;
  j["notes"] = notes;
  if (with_timestamp) j["timestamp"] = utc_now();
  return j.dump(2) + "\n";
}

std::string ProbeReport::to_csv() const {
  std::string out = "# schema=1\n";
  for (const auto& c : columns) out += c + ",";
  out += "measured,theoretical\n";
  for (const auto& r : rows) {
    for (double p : r.params) out += csv_number(p) + ",";
    out += csv_number(r.measured) + "," + csv_number(r.theoretical) + "\n";
  }
  return out;
}

Verdict ratio_verdict(const std::vector<double>& ratios, double bound, double* measured) {
  for (double r : ratios)
    if (!std::isfinite(r)) {
      if (measured) *measured = INFINITY;
      return Verdict::Fail;
    }
  const double s = spread(ratios);
  if (measured) *measured = s;
  return s < bound ? Verdict::Pass : Verdict::Fail;
}

GridSpec doubled(const GridSpec& g) {
  GridSpec d = g;
  for (int a = 0; a < g.dim; ++a) {
    d.length[a] = 2 * g.length[a];
    d.points[a] = 2 * g.points[a];
  }
  return d;
}

const std::vector<ProbeEntry>& probe_registry() {
  static const std::vector<ProbeEntry> entries = {
      {"decay", decay_probe, true, "tolerance"},
      {"localized_decay", localized_decay_probe, true, "slope_spread"},
      {"smoothing", smoothing_probe, true},
      {"duhamel_smoothing", duhamel_smoothing_probe, true},
      {"maximal", maximal_probe, true, "tolerance"},
      {"strichartz", strichartz_probe, true},
      {"interaction", interaction_probe, true},
      {"embedding", embedding_probe, true, "max_constant"},
      {"gwp", gwp_experiment, true},
      {"derivative_equivalence", derivative_equivalence_probe, true},
      {"x_equivalence", x_equivalence_probe, true},
  };
  return entries;
}

std::vector<std::string> probe_names() {
  std::vector<std::string> out;
  for (const auto& e : probe_registry()) out.push_back(e.name);
  return out;
}

const ProbeEntry* find_probe(const std::string& name) {
  std::string key = name;
  for (const std::string suffix : {"_probe", "_experiment"})
    if (key.size() > suffix.size() && key.ends_with(suffix)) key.resize(key.size() - suffix.size());
  for (const auto& e : probe_registry())
    if (e.name == key) return &e;
  return nullptr;
}

std::vector<std::string> default_suite() { return probe_names(); }

ProbeReport run_probe(const std::string& name, const ProbeContext& ctx, bool sensitivity) {
  const ProbeEntry* e = find_probe(name);
  if (!e) throw std::invalid_argument("unknown probe '" + name + "'");
  return run_probe(*e, ctx, sensitivity);
}

ProbeReport run_probe(const ProbeEntry& e, const ProbeContext& ctx, bool sensitivity) {
  ProbeReport r = e.run(ctx);
  r.name = e.name;
  r.seed = ctx.seed;
  if (!sensitivity || !e.sensitivity) return r;
  ProbeContext big = ctx;
  big.grid = doubled(ctx.grid);
  big.params.set("grid_scale", 2.0 * ctx.params.get("grid_scale", 1.0));
  const ProbeReport r2 = e.run(big);
  r.sensitivity.evaluated = true;
  r.sensitivity.value_L = r.measured;
  r.sensitivity.value_2L = r2.measured;
  r.sensitivity.pass_L = r.passed();
  r.sensitivity.pass_2L = r2.passed();
  if (r.verdict != Verdict::Inconclusive && r2.verdict != Verdict::Inconclusive && r.passed() != r2.passed()) {
    r.notes.push_back(fmt::format("verdict flips between L ({}) and 2L ({})", to_string(r.verdict), to_string(r2.verdict)));
    r.verdict = Verdict::Unstable;
  } else if (r.passed() && r2.verdict == Verdict::Inconclusive) {
    r.notes.push_back("2L run inconclusive");
  }
  return r;
}

}  // namespace modspec

namespace modspec::probe_detail {

ResonantForcing::ResonantForcing(const DecompositionFamily& fam, const Index& k, Rng& rng, int modes)
    : fam_(&fam) {
  for (int q = 0; q < modes; ++q) {
    g_.push_back(random_box_field(fam, k, rng).as_frequency());
    phi_.push_back(2 * M_PI * rng.uniform());
  }
}

double ResonantForcing::envelope(int q, double t, double T) const { return std::cos(M_PI * q * t / T + phi_[q]); }

double ResonantForcing::integral(int q, double t, double T) const {
  if (q == 0) return t * std::cos(phi_[0]);
  const double w = M_PI * q / T;
  return (std::sin(w * t + phi_[q]) - std::sin(phi_[q])) / w;
}

std::vector<Index> ResonantForcing::cubes() const { return detail::active_cubes(g_.front(), *fam_); }

SpacetimeField ResonantForcing::sample(const CubeSampler& sampler, const Index& j, int eps, const GridSpec& window,
                                       const PatchSymbol& m, bool integrated) const {
  const double T = window.horizon;
  std::vector<SpatialField> acc;
  for (std::size_t q = 0; q < g_.size(); ++q) {
    const SpacetimeField free = sampler.sample_free(g_[q], j, eps, window, m);
    if (acc.empty()) acc.assign(free.count(), SpatialField::zeros(free.grid()));
    for (int n = 0; n <= window.time_steps; ++n) {
      const double t = window.time_at(n);
      const double w = integrated ? integral(int(q), t, T) : envelope(int(q), t, T);
      const SpatialField& src = free.slice(n);
      for (std::size_t i = 0; i < src.size(); ++i) acc[n][i] += w * src[i];
    }
  }
  const GridSpec coarse = sampler.coarse_grid().with_time(window.horizon, window.time_steps);
  return SpacetimeField(coarse, std::move(acc));
}

SpacetimeField ResonantForcing::field(int eps, const GridSpec& window) const {
  const GridSpec& g = fam_->grid();
  std::vector<std::size_t> support;
  std::vector<double> omega;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g_[0][i] != cplx(0, 0)) {
      support.push_back(i);
      omega.push_back(dispersion(frequency_of(g, i), g.dim, eps));
    }
  return SpacetimeField::generate(window, [&](int, double t) {
    SpatialField out(g, Representation::Frequency);
    for (std::size_t j = 0; j < support.size(); ++j) {
      const std::size_t i = support[j];
      cplx v = 0;
      for (std::size_t q = 0; q < g_.size(); ++q) v += envelope(int(q), t, window.horizon) * g_[q][i];
      out[i] = phase(t, omega[j]) * v;
    }
    return out;
  });
}

Verdict combine(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::Pass: return 0;
      case Verdict::Inconclusive: return 1;
      case Verdict::Unstable: return 2;
      case Verdict::Fail: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  return (std::uint64_t(parts[0]) << 32) | parts[1];
}

}  // namespace modspec::probe_detail
