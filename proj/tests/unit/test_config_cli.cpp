#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "common.hpp"
#include "modspec/cli.hpp"
#include "modspec/config.hpp"
#include "modspec/container.hpp"

using namespace modspec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory removed on destruction.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("modspec-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(MODSPEC_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", 0, 0, "");
}

const char* kTinyGrid = "grid: {N: 64, L: 8pi, T: 0.25, steps: 4}\n";

}  // namespace

TEST(Config, DefaultTextParsesToDefaults) {
  const RunConfig d;
  const RunConfig c = parse_config(default_config_text());
  EXPECT_EQ(c.grid, d.grid);
  EXPECT_EQ(c.eps, d.eps);
  EXPECT_EQ(c.iterates, d.iterates);
  EXPECT_EQ(c.seed, d.seed);
  EXPECT_EQ(c.io.out, d.io.out);
  EXPECT_EQ(c.io.series_points, d.io.series_points);
  EXPECT_EQ(c.nonlinearity.kappa, d.nonlinearity.kappa);
  EXPECT_EQ(c.nonlinearity.lambda, d.nonlinearity.lambda);
  EXPECT_EQ(c.initial.delta, d.initial.delta);
  EXPECT_TRUE(c.probes.empty());
  EXPECT_EQ(parse_config("").grid, d.grid);
}

TEST(Config, ValuesAndPiLengths) {
  const auto c = parse_config(
      "seed: 9\n"
      "grid: {dim: 2, N: [64, 128], L: [8*pi, 16pi], T: 0.5, steps: 8}\n"
      "physics:\n"
      "  eps: [1]\n"
      "  nonlinearity: {lambda: [[0, 1], 2], kappa: [4, 5]}\n"
      "probes:\n"
      "  - decay\n"
      "  - {name: smoothing_probe, params: {k: [4, 8], samples: 2}, tolerance: 5, sensitivity: false}\n");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_DOUBLE_EQ(c.grid.length[0], 8 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(c.grid.length[1], 16 * std::numbers::pi);
  EXPECT_EQ(c.grid.points[1], 128);
  EXPECT_EQ(c.eps, std::vector<int>{1});
  EXPECT_EQ(c.nonlinearity.lambda[0], cplx(0, 1));
  ASSERT_EQ(c.probes.size(), 2u);
  EXPECT_EQ(c.probes[1].name, "smoothing");
  EXPECT_FALSE(c.probes[1].sensitivity);
  const auto ctx = c.context(c.request("smoothing"));
  EXPECT_EQ(ctx.params.get("bound", 0), 5);
  EXPECT_EQ(ctx.params.list("k", {}), (std::vector<double>{4, 8}));
  EXPECT_EQ(ctx.seed, 9u);
  EXPECT_EQ(c.context(c.request("decay")).params.values().count("tolerance"), 0u);
  EXPECT_EQ(parse_config("probes: all\n").probes.size(), probe_names().size());
}

TEST(Config, GeneralNonlinearity) {
  const auto c = parse_config(
      "physics:\n"
      "  nonlinearity:\n"
      "    form: general\n"
      "    m: 5\n"
      "    M: 5\n"
      "    terms:\n"
      "      - coeff: [1, -1]\n"
      "        factors: [{alpha: [1, 0]}, {conjugate: true}, {}, {}, {}, {}]\n");
  ASSERT_EQ(c.nonlinearity.form, NonlinearityForm::General);
  ASSERT_EQ(c.nonlinearity.terms.size(), 1u);
  EXPECT_EQ(c.nonlinearity.terms[0].coeff, cplx(1, -1));
  EXPECT_EQ(c.nonlinearity.terms[0].factors[0].alpha[0], 1);
  EXPECT_TRUE(c.nonlinearity.terms[0].factors[1].conjugate);
}

TEST(Config, ErrorsCarryLineAndColumn) {
  auto e = config_error("seed: 1\ngrid:\n  Lx: 3\n");
  EXPECT_EQ(e.line, 3);
  EXPECT_EQ(e.column, 3);
  EXPECT_NE(std::string(e.what()).find("expected one of"), std::string::npos);
  e = config_error("grid: {N: 63}\n");
  EXPECT_EQ(e.line, 1);
  e = config_error("probes: [decay, bogus]\n");
  EXPECT_NE(std::string(e.what()).find("x_equivalence"), std::string::npos);
  config_error("physics: {iterates: 2}\n");
  config_error("physics: {nonlinearity: {kappa: [1, 1]}}\n");
  config_error("grid: {L: eightpi}\n");
  config_error("grid: [unclosed\n");
  EXPECT_NO_THROW(parse_config("physics: {nonlinearity: {kappa: [1, 1], strict: false}}\n"));
}

TEST(Cli, ExitStatusPrecedence) {
  EXPECT_EQ(cli::exit_status({}), cli::kPass);
  EXPECT_EQ(cli::exit_status({Verdict::Pass, Verdict::Pass}), cli::kPass);
  EXPECT_EQ(cli::exit_status({Verdict::Pass, Verdict::Unstable}), cli::kUnstable);
  EXPECT_EQ(cli::exit_status({Verdict::Unstable, Verdict::Fail}), cli::kFail);
  EXPECT_EQ(cli::exit_status({Verdict::Inconclusive, Verdict::Unstable}), cli::kFail);
}

TEST(Cli, EmptyAndUnknownProbeLists) {
  Scratch s("lists");
  const auto cfg = s.write("c.yaml", "probes: []\n");
  EXPECT_EQ(run_cli("probe --config " + cfg.string() + " --out " + (s.dir / "o").string(), s.dir / "log"), 0);
  EXPECT_TRUE(!fs::exists(s.dir / "o") || fs::is_empty(s.dir / "o"));
  EXPECT_EQ(run_cli("probe nonexistent --out " + (s.dir / "o").string(), s.dir / "log"), 3);
  EXPECT_NE(slurp(s.dir / "log").find("decay"), std::string::npos);
  EXPECT_EQ(run_cli("probe --config " + (s.dir / "missing.yaml").string(), s.dir / "log"), 3);
  EXPECT_EQ(run_cli("--no-such-flag", s.dir / "log"), 3);
}

TEST(Cli, ProbeRunAndReportAggregation) {
  Scratch s("report");
  const auto cfg = s.write("c.yaml", "probes:\n  - {name: decay_probe, params: {p: 2}, sensitivity: false}\n");
  const auto out = s.dir / "o";
  ASSERT_EQ(run_cli("probe --config " + cfg.string() + " --out " + out.string(), s.dir / "log"), 0)
      << slurp(s.dir / "log");
  const auto j = nlohmann::json::parse(slurp(out / "decay.json"));
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(slurp(out / "decay.csv").rfind("# schema=1\n", 0), 0u);
  ASSERT_EQ(run_cli("report " + out.string(), s.dir / "log"), 0);
  const std::string summary = slurp(out / "summary.csv");
  EXPECT_EQ(summary.rfind("# schema=1\nprobe,theoretical,measured,tolerance,verdict\n", 0), 0u);
  EXPECT_NE(summary.find("decay,"), std::string::npos);
  EXPECT_NE(summary.find("PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "summary.txt"));
}

TEST(Cli, NormOfZeroFieldIsZero) {
  Scratch s("norm");
  save_field((s.dir / "z.mspf").string(), SpatialField::zeros(testing_support::small_grid()));
  for (const char* kind : {"modulation", "lebesgue", "besov", "box_lp"}) {
    ASSERT_EQ(run_cli(std::string("norm ") + (s.dir / "z.mspf").string() + " --kind " + kind, s.dir / "log"), 0)
        << kind << slurp(s.dir / "log");
    EXPECT_EQ(nlohmann::json::parse(slurp(s.dir / "log"))["value"].get<double>(), 0) << kind;
  }
  EXPECT_EQ(run_cli("norm " + (s.dir / "z.mspf").string() + " --kind bogus", s.dir / "log"), 3);
  EXPECT_EQ(run_cli("norm " + (s.dir / "missing.mspf").string(), s.dir / "log"), 3);
}

TEST(Cli, SolveIsDeterministic) {
  Scratch s("solve");
  const auto cfg = s.write("c.yaml", std::string(kTinyGrid) + "physics: {eps: [1], iterates: 3}\n" +
                                         "io: {series_points: 4}\n");
  for (const char* run : {"a", "b"})
    ASSERT_EQ(run_cli("solve --config " + cfg.string() + " --out " + (s.dir / run).string(), s.dir / "log"), 0)
        << slurp(s.dir / "log");
  const std::string a = slurp(s.dir / "a" / "solve_eps1.csv");
  EXPECT_EQ(a, slurp(s.dir / "b" / "solve_eps1.csv"));
  EXPECT_EQ(a.rfind("# schema=1\nt,l2,", 0), 0u);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2 + 4 + 1);
  const auto j = nlohmann::json::parse(slurp(s.dir / "a" / "solve_eps1.json"));
  EXPECT_EQ(j["status"], "contraction");
}
