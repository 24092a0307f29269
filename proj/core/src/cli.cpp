#include "modspec/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "modspec/container.hpp"
#include "modspec/random.hpp"

namespace modspec::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

ProbeReport error_report(const std::string& name, std::uint64_t seed, const std::string& what) {
  ProbeReport r;
  r.name = name;
  r.seed = seed;
  r.verdict = Verdict::Fail;
  r.notes.push_back("error: " + what);
  return r;
}

SpatialField initial_data(const RunConfig& cfg) {
  const InitialData& in = cfg.initial;
  if (in.shape == "zero") return SpatialField::zeros(cfg.grid);
  if (in.shape == "file") {
    SpatialField f = load_field(in.file);
    require_same_space(f.grid(), cfg.grid, "solve initial data");
    return f;
  }
  return in.delta * gaussian(cfg.grid, in.width);
}

// Same X variant and exponent as the Picard driver.
std::pair<XVariant, double> x_choice(const NonlinearitySpec& spec) {
  if (spec.form == NonlinearityForm::Simple) {
    const int k = spec.kappa.empty() ? 2 : *std::min_element(spec.kappa.begin(), spec.kappa.end());
    return {XVariant::X1, std::max(2.0, double(k))};
  }
  return {XVariant::X, std::max(2.0, double(spec.m))};
}

SpacetimeField prefix(const SpacetimeField& u, int m) {
  std::vector<SpatialField> s(u.slices().begin(), u.slices().begin() + m + 1);
  return SpacetimeField(u.grid().with_time(u.time(m), m), std::move(s));
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v == 0 ? 0.0 : v);
}

}  // namespace

RunConfig apply(RunConfig cfg, const Overrides& o) {
  if (o.out) cfg.io.out = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.parallel) cfg.parallel = std::max(1, *o.parallel);
  return cfg;
}

int exit_status(const std::vector<Verdict>& verdicts) {
  bool unstable = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::Fail || v == Verdict::Inconclusive) return kFail;
    unstable = unstable || v == Verdict::Unstable;
  }
  return unstable ? kUnstable : kPass;
}

int cmd_probe(const RunConfig& cfg, const std::vector<std::string>& names, std::ostream& log) {
  std::vector<ProbeRequest> jobs;
  try {
    if (names.empty()) {
      jobs = cfg.probes;
    } else {
      for (const auto& n : names) {
        if (!find_probe(n)) {
          std::string list;
          for (const auto& s : probe_names()) list += (list.empty() ? "" : ", ") + s;
          log << fmt::format("error: unknown probe '{}'\nvalid probes: {}\n", n, list);
          return kConfigError;
        }
        jobs.push_back(cfg.request(n));
      }
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  // Each probe writes one pair of files; later duplicates are dropped.
  std::vector<ProbeRequest> unique;
  for (const auto& j : jobs)
    if (std::none_of(unique.begin(), unique.end(), [&](const ProbeRequest& u) { return u.name == j.name; }))
      unique.push_back(j);
  if (unique.empty()) return kPass;

  const fs::path out(cfg.io.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    log << fmt::format("error: cannot create output directory {}: {}\n", out.string(), ec.message());
    return kConfigError;
  }

  std::vector<Verdict> verdicts(unique.size(), Verdict::Fail);
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto say = [&](const std::string& s) {
    std::lock_guard lock(log_mu);
    log << s << std::flush;
  };
  auto worker = [&] {
    for (std::size_t i = next++; i < unique.size(); i = next++) {
      const ProbeRequest& req = unique[i];
      say(fmt::format("[{}] running\n", req.name));
      ProbeReport r;
      try {
        r = run_probe(req.name, cfg.context(req), req.sensitivity);
      } catch (const std::exception& e) {
        r = error_report(req.name, cfg.seed, e.what());
      }
      try {
        write_file(out / (req.name + ".json"), r.to_json(true) + "\n");
        write_file(out / (req.name + ".csv"), r.to_csv());
      } catch (const std::exception& e) {
        say(fmt::format("[{}] {}\n", req.name, e.what()));
        r.verdict = Verdict::Fail;
      }
      verdicts[i] = r.verdict;
      say(fmt::format("[{}] {} (measured {}, tolerance {})\n", req.name, upper(to_string(r.verdict)),
                      fmt_num(r.measured), fmt_num(r.tolerance)));
      for (const auto& n : r.notes) say(fmt::format("[{}]   {}\n", req.name, n));
    }
  };
  const int k = std::clamp(cfg.parallel, 1, static_cast<int>(unique.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return exit_status(verdicts);
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  SpatialField u0;
  try {
    u0 = initial_data(cfg);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  const fs::path out(cfg.io.out);
  fs::create_directories(out);
  const DecompositionFamily fam(cfg.grid);
  const auto [variant, xexp] = x_choice(cfg.nonlinearity);
  const double sreg = cfg.nonlinearity.form == NonlinearityForm::Simple ? 1.5 : 4.5;
  int status = kPass;
  for (int eps : cfg.eps) {
    PicardRun run;
    run.u0 = u0;
    run.eps = eps;
    run.spec = cfg.nonlinearity;
    run.window = cfg.grid;
    run.iterates = cfg.iterates;
    SpacetimeField u;
    const PicardRun res = picard_iterate(run, &u);
    const std::string stem = fmt::format("solve_eps{}", eps);
    write_file(out / (stem + ".json"), res.to_json() + "\n");

    const int S = u.steps();
    const int P = std::min(cfg.io.series_points, S);
    std::string csv = fmt::format("# schema=1\nt,l2,modulation_{},x_total,x_smoothing,x_maximal,x_strichartz\n",
                                  fmt_num(sreg));
    int last = -1;
    for (int j = 0; j <= P; ++j) {
      const int m = static_cast<int>(std::lround(double(j) * S / P));
      if (m == last) continue;
      last = m;
      const SpatialField& sl = u.slice(m);
      const double l2 = lebesgue_norm(sl, 2);
      double mod = NAN;
      try {
        mod = modulation_norm(sl, sreg, fam).value;
      } catch (const std::exception&) {
      }
      // X partials over [0, t]; the zero-length window at t = 0 is reported as 0.
      double xt = 0, x1 = 0, x2 = 0, x3 = 0;
      if (m > 0 && std::isfinite(l2)) {
        const NormReport xr = x_norm(prefix(u, m), variant, fam, {xexp});
        xt = xr.value;
        x1 = xr.parts.at("smoothing");
        x2 = xr.parts.at("maximal");
        x3 = xr.parts.at("strichartz");
      }
      csv += fmt::format("{},{},{},{},{},{},{}\n", fmt_num(u.time(m)), fmt_num(l2), fmt_num(mod), fmt_num(xt),
                         fmt_num(x1), fmt_num(x2), fmt_num(x3));
    }
    write_file(out / (stem + ".csv"), csv);

    if (cfg.io.dump_fields) {
      for (double t : cfg.io.dump_times) {
        const int m = std::clamp(static_cast<int>(std::lround(t / u.grid().dt())), 0, S);
        save_field((out / fmt::format("{}_t{:g}.mspf", stem, u.time(m))).string(), u.slice(m));
      }
    }
    log << fmt::format("[solve eps={}] status {}; d_j:", eps, res.status);
    for (double d : res.differences) log << " " << fmt::format("{:.3e}", d);
    log << "\n";
    for (const auto& w : res.warnings) log << "[solve] warning: " << w << "\n";
    if (res.status != "contraction") {
      log << fmt::format("[solve eps={}] no contraction: ratios", eps);
      for (double r : res.ratios) log << " " << fmt::format("{:.3g}", r);
      log << "\n";
      status = kFail;
    }
  }
  return status;
}

int cmd_norm(const std::string& field_file, const NormRequest& req, std::ostream& out, std::ostream& log) {
  SpatialField f;
  try {
    f = load_field(field_file);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    NormReport rep;
    if (req.kind == "lebesgue") {
      rep.spec = fmt::format("L^{}", fmt_num(req.p));
      rep.value = lebesgue_norm(f, req.p);
    } else {
      const DecompositionFamily fam(f.grid());
      if (req.kind == "modulation") {
        rep = modulation_norm(f, req.s, fam);
      } else if (req.kind == "besov") {
        rep.spec = fmt::format("B^{}_{{2,1}}", fmt_num(req.s));
        rep.value = besov_norm(f, req.s, fam);
      } else if (req.kind == "box_lp") {
        rep = box_lp_sum(f, req.p, req.s, fam);
      } else {
        log << fmt::format("error: unknown norm kind '{}' (lebesgue, modulation, besov, box_lp)\n", req.kind);
        return kConfigError;
      }
    }
    out << rep.to_json() << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kPass;
}

int cmd_report(const std::string& dir, std::ostream& out, std::ostream& log) {
  using nlohmann::json;
  const fs::path root(dir);
  if (!fs::is_directory(root)) {
    log << fmt::format("error: {} is not a directory\n", dir);
    return kConfigError;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  struct Row {
    std::string probe, theoretical, measured, tolerance, verdict;
  };
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_number()) return fmt_num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  std::vector<Row> rows;
  for (const auto& p : files) {
    std::ifstream in(p);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("probe") || !j.contains("verdict")) continue;
    rows.push_back({j["probe"].get<std::string>(), cell(j.value("theoretical", json())),
                    cell(j.value("measured", json())), cell(j.value("tolerance", json())),
                    upper(j["verdict"].get<std::string>())});
  }

  std::string csv = "# schema=1\nprobe,theoretical,measured,tolerance,verdict\n";
  for (const auto& r : rows)
    csv += fmt::format("{},{},{},{},{}\n", r.probe, r.theoretical, r.measured, r.tolerance, r.verdict);
  std::size_t w[5] = {5, 11, 8, 9, 7};
  for (const auto& r : rows) {
    w[0] = std::max(w[0], r.probe.size());
    w[1] = std::max(w[1], r.theoretical.size());
    w[2] = std::max(w[2], r.measured.size());
    w[3] = std::max(w[3], r.tolerance.size());
  }
  std::string txt = fmt::format("{:<{}}  {:>{}}  {:>{}}  {:>{}}  {}\n", "probe", w[0], "theoretical", w[1], "measured",
                                w[2], "tolerance", w[3], "verdict");
  for (const auto& r : rows)
    txt += fmt::format("{:<{}}  {:>{}}  {:>{}}  {:>{}}  {}\n", r.probe, w[0], r.theoretical, w[1], r.measured, w[2],
                       r.tolerance, w[3], r.verdict);
  try {
    write_file(root / "summary.csv", csv);
    write_file(root / "summary.txt", txt);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kConfigError;
  }
  out << txt;
  return kPass;
}

}  // namespace modspec::cli
