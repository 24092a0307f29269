#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modspec/evolution.hpp"
#include "modspec/probes.hpp"

namespace modspec {

// Parse or validation failure; line and column are 1-based (0 when unknown).
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& origin, int line, int column, const std::string& what);
  int line = 0;
  int column = 0;
};

struct InitialData {
  std::string shape = "gaussian";  // gaussian | zero | file
  double width = 1.0;
  double delta = 1e-3;
  std::string file;
};

struct ProbeRequest {
  std::string name;
  Params params;
  std::optional<double> tolerance;
  bool sensitivity = true;
};

struct IoConfig {
  std::string out = "modspec-out";
  bool dump_fields = false;
  std::vector<double> dump_times;
  int series_points = 16;
};

struct RunConfig {
  GridSpec grid = GridSpec::cube(2, 8 * std::numbers::pi, 320, 1.0, 32);
  std::vector<int> eps{0, 1};
  NonlinearitySpec nonlinearity = NonlinearitySpec::simple({1.0, 1.0}, {4, 4});
  InitialData initial;
  int iterates = 5;
  std::vector<ProbeRequest> probes;
  IoConfig io;
  std::uint64_t seed = 1;
  int parallel = 1;

  // Request for a probe by name (config entry if present, otherwise defaults).
  ProbeRequest request(const std::string& name) const;
  ProbeContext context(const ProbeRequest& req) const;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
// Annotated YAML listing every key with its default.
std::string default_config_text();

}  // namespace modspec
