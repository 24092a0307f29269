#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modspec/cli.hpp"

namespace {

using namespace modspec;

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int parallel = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Run configuration (YAML)");
  app->add_option("--out", c.out, "Output directory (overrides io.out)");
  app->add_option("--seed", c.seed, "Random seed (overrides seed)");
  app->add_option("--parallel", c.parallel, "Concurrent probe jobs")->check(CLI::PositiveNumber);
}

RunConfig resolve(const Common& c, const CLI::App* app) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  cli::Overrides o;
  if (app->count("--out")) o.out = c.out;
  if (app->count("--seed")) o.seed = c.seed;
  if (app->count("--parallel")) o.parallel = c.parallel;
  return cli::apply(std::move(cfg), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical probes for fourth-order Schrodinger estimates in modulation spaces"};
  app.require_subcommand(1);

  Common pc;
  std::vector<std::string> names;
  bool list = false;
  auto* probe = app.add_subcommand("probe", "Run probes and write JSON/CSV reports");
  add_common(probe, pc);
  probe->add_option("names", names, "Probe names (default: the config's probe list)");
  probe->add_flag("--list", list, "Print the registered probe names and exit");

  Common sc;
  auto* solve = app.add_subcommand("solve", "Picard iteration from the config's initial data");
  add_common(solve, sc);

  std::string field;
  cli::NormRequest nreq;
  auto* norm = app.add_subcommand("norm", "Print a norm of a field container as JSON");
  norm->add_option("field", field, "Field container file")->required();
  norm->add_option("--kind", nreq.kind, "lebesgue | modulation | besov | box_lp")->capture_default_str();
  norm->add_option("--p", nreq.p, "Lebesgue exponent")->capture_default_str();
  norm->add_option("--s", nreq.s, "Regularity weight")->capture_default_str();

  std::string dir;
  auto* report = app.add_subcommand("report", "Aggregate probe reports into a summary table");
  report->add_option("dir", dir, "Directory with probe reports")->required();

  auto* defaults = app.add_subcommand("defaults", "Print the annotated default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (*probe) {
      if (list) {
        for (const auto& n : probe_names()) std::cout << n << "\n";
        return cli::kPass;
      }
      return cli::cmd_probe(resolve(pc, probe), names, std::cerr);
    }
    if (*solve) return cli::cmd_solve(resolve(sc, solve), std::cerr);
    if (*norm) return cli::cmd_norm(field, nreq, std::cout, std::cerr);
    if (*report) return cli::cmd_report(dir, std::cout, std::cerr);
    if (*defaults) {
      std::cout << default_config_text();
      return cli::kPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kFail;
  }
  return cli::kConfigError;
}
