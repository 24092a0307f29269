#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modspec/config.hpp"

namespace modspec::cli {

enum Exit : int { kPass = 0, kFail = 1, kUnstable = 2, kConfigError = 3 };

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallel;
};

RunConfig apply(RunConfig cfg, const Overrides& o);

// Runs the named probes (the config's list when names is empty) and writes
// <out>/<probe>.json and <out>/<probe>.csv. Progress goes to log.
int cmd_probe(const RunConfig& cfg, const std::vector<std::string>& names, std::ostream& log);

// Picard iteration per eps: <out>/solve_eps<e>.json and <out>/solve_eps<e>.csv.
int cmd_solve(const RunConfig& cfg, std::ostream& log);

struct NormRequest {
  std::string kind = "modulation";  // lebesgue | modulation | besov | box_lp
  double p = 2;
  double s = 0;
};

// Loads a field container and prints the norm report as JSON to out.
int cmd_norm(const std::string& field_file, const NormRequest& req, std::ostream& out, std::ostream& log);

// Aggregates every probe report in dir into <dir>/summary.csv and <dir>/summary.txt;
// the text table is also written to out.
int cmd_report(const std::string& dir, std::ostream& out, std::ostream& log);

// Exit status for a set of verdicts: any fail or inconclusive -> 1, else any unstable -> 2.
int exit_status(const std::vector<Verdict>& verdicts);

}  // namespace modspec::cli
