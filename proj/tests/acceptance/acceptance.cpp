// Acceptance runner: one criterion per invocation, one PASS/FAIL line on stdout.
#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "modspec/decomp.hpp"
#include "modspec/evolution.hpp"
#include "modspec/multiplier.hpp"
#include "modspec/norms.hpp"
#include "modspec/probes.hpp"
#include "modspec/random.hpp"

using namespace modspec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

fs::path g_out = "acceptance-out";

GridSpec desk_grid() { return GridSpec::cube(2, 8 * std::numbers::pi, 320); }

ProbeContext desk_context() {
  ProbeContext ctx;
  ctx.grid = desk_grid();
  ctx.eps = {0, 1};
  ctx.seed = 1;
  return ctx;
}

void save(const ProbeReport& r) {
  fs::create_directories(g_out);
  std::ofstream(g_out / (r.name + ".json")) << r.to_json();
  std::ofstream(g_out / (r.name + ".csv")) << r.to_csv();
}

std::string num(double v) { return fmt::format("{:.4g}", v); }

// Probe at L and 2L; the criterion holds when the combined verdict is pass.
Outcome probe_criterion(const std::string& name, Params params = {}) {
  ProbeContext ctx = desk_context();
  ctx.params = std::move(params);
  const ProbeReport r = run_probe(name, ctx);
  save(r);
  std::string d = fmt::format("{} {} (tolerance {}), 2L {}, verdict {}", r.quantity, num(r.measured), num(r.tolerance),
                              num(r.sensitivity.value_2L), to_string(r.verdict));
  for (const auto& n : r.notes) d += "; " + n;
  return {r.passed(), d};
}

double l2(const SpatialField& f) { return lebesgue_norm(f, 2); }

Outcome partition_of_unity() {
  const GridSpec g = desk_grid();
  const DecompositionFamily fam(g);
  std::vector<double> sum(g.size(), 0.0);
  const int n0 = g.points[0], n1 = g.points[1];
  for (const auto& k : fam.indices()) {
    const AxisSupport& a = fam.axis_support(0, k[0]);
    const AxisSupport& b = fam.axis_support(1, k[1]);
    for (int i = a.lo; i <= a.hi(); ++i)
      for (int j = b.lo; j <= b.hi(); ++j) {
        const std::size_t idx = std::size_t(g.freq_slot(0, i)) * n1 + g.freq_slot(1, j);
        sum[idx] += fam.sigma(k, frequency_of(g, idx));
      }
  }
  double worst = 0;
  std::size_t interior = 0;
  for (std::size_t i = 0; i < std::size_t(n0) * n1; ++i)
    if (fam.in_interior(frequency_of(g, i))) {
      ++interior;
      worst = std::max(worst, std::abs(sum[i] - 1));
    }
  return {worst < 1e-12 && interior > 0,
          fmt::format("max |sum sigma_k - 1| = {:.3g} over {} interior frequencies (bound 1e-12)", worst, interior)};
}

Outcome unitarity_group_law() {
  const GridSpec g = desk_grid();
  Rng rng(2);
  double unit = 0, group = 0;
  for (int n = 0; n < 20; ++n) {
    const SpatialField f = random_spectrum(g, rng, [](const Point&) { return 1.0; });
    // Dyadic times keep t + s exact; otherwise rounding of the sum alone moves phases near |xi|^4 ~ 1e7.
    const double t = std::floor(10240 * rng.uniform()) / 1024, s = std::floor(10240 * rng.uniform()) / 1024;
    for (int eps : {0, 1}) {
      unit = std::max(unit, std::abs(l2(propagate(f, t, eps)) / l2(f) - 1));
      group = std::max(group, l2(propagate(propagate(f, s, eps), t, eps) - propagate(f, t + s, eps)) / l2(f));
    }
  }
  return {unit <= 1e-12 && group < 1e-11,
          fmt::format("max |ratio - 1| = {:.3g} (bound 1e-12), max group-law residual = {:.3g} (bound 1e-11), "
                      "20 fields, both eps",
                      unit, group)};
}

// Decay needs a box that stays free of wraparound; L = 200 is the largest desk-sized choice.
Outcome dispersive_decay() {
  ProbeContext ctx = desk_context();
  ctx.params = Params{{"length", {200}}, {"points", {2048}}};
  const ProbeReport r = run_probe("decay", ctx);
  save(r);
  std::string d = fmt::format("verdict {} (tolerance {})", to_string(r.verdict), num(r.tolerance));
  for (const auto& n : r.notes) d += "; " + n;
  // Slopes over every time, wraparound included; reported, never used for the verdict.
  ctx.params.set("wrap_threshold", 1.0);
  const ProbeReport diag = decay_probe(ctx);
  d += "; diagnostic slopes with wraparound:";
  for (const auto& [k, v] : diag.metrics)
    if (k.starts_with("slope_"))
      d += fmt::format(" {} {} (theory {})", k.substr(6), num(v), num(diag.metrics.at("theory_" + k.substr(6))));
  return {r.passed(), d};
}

PicardRun picard(double delta) {
  PicardRun run;
  const GridSpec g = desk_grid().with_time(1.0, 32);
  run.u0 = gaussian(g, 1.0, delta);
  run.eps = 1;
  run.spec = NonlinearitySpec::simple({1.0, 1.0}, {4, 4});
  run.window = g;
  run.iterates = 5;
  return picard_iterate(run);
}

Outcome picard_contraction() {
  const PicardRun small = picard(1e-3);
  const PicardRun big = picard(10);
  fs::create_directories(g_out);
  std::ofstream(g_out / "picard_small.json") << small.to_json();
  std::ofstream(g_out / "picard_large.json") << big.to_json();
  const double r32 = small.ratios.size() > 2 ? small.ratios[2] : NAN;
  const bool ok = small.contraction && r32 <= 0.5 && !big.contraction;
  return {ok, fmt::format("delta 1e-3: status {}, d3/d2 = {:.3g} (bound 0.5); delta 10: status {}", small.status, r32,
                          big.status)};
}

Outcome long_time_boundedness() {
  const GridSpec g = desk_grid();
  const DecompositionFamily fam(g);
  const auto spec = NonlinearitySpec::simple({1.0, 1.0}, {4, 4});
  const SpatialField u0 = gaussian(g, 1.0, 1e-3);
  const double T = 100;
  const int steps = 800, snaps = 100;
  const SpacetimeField fine = evolve(u0, 1, spec, T, 2 * steps, snaps);
  const SpacetimeField coarse = evolve(u0, 1, spec, T, steps, snaps);
  const double diff = l2(fine.slice(snaps) - coarse.slice(snaps));
  const double m0 = modulation_norm(u0, 1.5, fam).value;
  double sup = 0;
  for (int m = 0; m <= snaps; ++m) sup = std::max(sup, modulation_norm(fine.slice(m), 1.5, fam).value);
  return {diff < 1e-8 && sup <= 2 * m0,
          fmt::format("half-step terminal difference {:.3g} (bound 1e-8); sup_t M^1.5_2,1 / initial = {:.6g} (bound 2), "
                      "T = {}, {} vs {} steps",
                      diff, sup / m0, T, steps, 2 * steps)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MODSPEC_CLI) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = g_out / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "probe.yaml") << "seed: 7\n"
                                       "probes:\n"
                                       "  - {name: decay, params: {p: [2]}}\n"
                                       "  - {name: derivative_equivalence, params: {samples: 5, k: [4, 8]}}\n";
  std::ofstream(dir / "solve.yaml") << "seed: 7\n"
                                       "grid: {N: 64, L: 8pi, T: 0.25, steps: 4}\n"
                                       "physics: {eps: [1], iterates: 3}\n"
                                       "io: {series_points: 8}\n";
  int worst = 0;
  for (const char* run : {"a", "b"}) {
    const std::string out = (dir / run).string();
    worst = std::max(worst, run_cli(fmt::format("probe --config {} --out {} --parallel {}", (dir / "probe.yaml").string(),
                                                out, run[0] == 'a' ? 1 : 2)));
    worst = std::max(worst, run_cli(fmt::format("solve --config {} --out {}", (dir / "solve.yaml").string(), out)));
  }
  int files = 0, mismatched = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    if (slurp(e.path()) != slurp(dir / "b" / e.path().filename())) ++mismatched;
  }
  return {files >= 3 && mismatched == 0,
          fmt::format("{} CSV files compared across two runs, {} differ (worst CLI exit {})", files, mismatched, worst)};
}

std::vector<Criterion> criteria() {
  return {
      {1, "partition of unity", partition_of_unity},
      {2, "unitarity and group law", unitarity_group_law},
      {3, "dispersive decay", dispersive_decay},
      {4, "derivative equivalence", [] { return probe_criterion("derivative_equivalence"); }},
      {5, "homogeneous smoothing", [] { return probe_criterion("smoothing"); }},
      {6, "Duhamel smoothing", [] { return probe_criterion("duhamel_smoothing"); }},
      {7, "maximal function", [] { return probe_criterion("maximal"); }},
      {8, "Strichartz in l1_box", [] { return probe_criterion("strichartz"); }},
      {9, "embeddings", [] { return probe_criterion("embedding"); }},
      {10, "interaction lemmas", [] { return probe_criterion("interaction"); }},
      {11, "Picard contraction", picard_contraction},
      {12, "long-time small-data boundedness", long_time_boundedness},
      {13, "X and X' equivalence", [] { return probe_criterion("x_equivalence"); }},
      {14, "determinism", determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modspec acceptance runner"};
  std::vector<int> ids;
  std::string out = g_out.string();
  app.add_option("--criterion", ids, "criterion number(s), 1-14; all when omitted")->check(CLI::Range(1, 14));
  app.add_option("--out", out, "directory for probe reports");
  CLI11_PARSE(app, argc, argv);
  g_out = out;

  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << fmt::format("{} criterion {:2} {}: {} [{:.0f} s]", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail,
                             secs)
              << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
