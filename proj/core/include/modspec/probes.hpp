#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modspec/fit.hpp"
#include "modspec/grid.hpp"

namespace modspec {

enum class Verdict { Pass, Fail, Unstable, Inconclusive };
std::string to_string(Verdict v);

// Named numeric parameters; scalars are one-element lists.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<const std::string, std::vector<double>>> init) : values_(init) {}

  void set(const std::string& key, std::vector<double> v) { values_[key] = std::move(v); }
  void set(const std::string& key, double v) { values_[key] = {v}; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double get(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
  const std::map<std::string, std::vector<double>>& values() const { return values_; }

 private:
  std::map<std::string, std::vector<double>> values_;
};

struct SweepRow {
  std::vector<double> params;  // aligned with ProbeReport::columns
  double measured = 0;
  double theoretical = std::numeric_limits<double>::quiet_NaN();
};

struct Sensitivity {
  bool evaluated = false;
  double value_L = 0;
  double value_2L = 0;
  bool pass_L = false;
  bool pass_2L = false;
  double drift() const;  // |value_2L - value_L| / max(|value_L|, tiny)
};

struct ProbeReport {
  std::string name;
  std::string kind;       // exponent | ratio | count | experiment
  std::string estimate;   // the inequality under test, in words
  std::string quantity;   // what `measured` holds
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
  std::optional<LinearFit> fit;
  double theoretical = std::numeric_limits<double>::quiet_NaN();
  double measured = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Fail;
  Sensitivity sensitivity;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::Pass; }
  std::string to_json(bool with_timestamp = true) const;
  // "# schema=1", header row, one line per sweep row.
  std::string to_csv() const;
};

// Outcome of one probe evaluated on one grid.
struct ProbeContext {
  GridSpec grid;                // space grid; horizon/steps are probe defaults
  std::vector<int> eps{0, 1};
  std::uint64_t seed = 1;
  Params params;
};

using ProbeFn = std::function<ProbeReport(const ProbeContext&)>;

struct ProbeEntry {
  std::string name;
  ProbeFn run;
  bool sensitivity = true;  // repeat at 2L and compare
  // Parameter that carries the pass threshold; a config "tolerance" is written here.
  std::string tolerance_key = "bound";
};

const std::vector<ProbeEntry>& probe_registry();
std::vector<std::string> probe_names();
// Accepts the bare name or the name with a "_probe" / "_experiment" suffix.
const ProbeEntry* find_probe(const std::string& name);
std::vector<std::string> default_suite();

// Runs on ctx.grid and, when enabled, on the grid with doubled lengths and points.
// A verdict that differs between the two grids becomes Unstable.
ProbeReport run_probe(const std::string& name, const ProbeContext& ctx, bool sensitivity = true);
ProbeReport run_probe(const ProbeEntry& entry, const ProbeContext& ctx, bool sensitivity = true);

// Grid with both L and N doubled (same frequency spacing).
GridSpec doubled(const GridSpec& g);

// Individual probes (evaluated on a single grid).
ProbeReport decay_probe(const ProbeContext& ctx);
ProbeReport localized_decay_probe(const ProbeContext& ctx);
ProbeReport smoothing_probe(const ProbeContext& ctx);
ProbeReport duhamel_smoothing_probe(const ProbeContext& ctx);
ProbeReport maximal_probe(const ProbeContext& ctx);
ProbeReport strichartz_probe(const ProbeContext& ctx);
ProbeReport interaction_probe(const ProbeContext& ctx);
ProbeReport embedding_probe(const ProbeContext& ctx);
ProbeReport gwp_experiment(const ProbeContext& ctx);
ProbeReport derivative_equivalence_probe(const ProbeContext& ctx);
ProbeReport x_equivalence_probe(const ProbeContext& ctx);

// Ratio-stability verdict helper: pass iff spread < bound.
Verdict ratio_verdict(const std::vector<double>& ratios, double bound, double* measured = nullptr);

}  // namespace modspec
