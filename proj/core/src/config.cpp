#include "modspec/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace modspec {

ConfigError::ConfigError(const std::string& origin, int line, int column, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}:{}: {}", origin, line, column, what)
                                  : fmt::format("{}: {}", origin, what)),
      line(line),
      column(column) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    const YAML::Mark m = at.Mark();
    if (m.is_null()) throw ConfigError(origin_, 0, 0, what);
    throw ConfigError(origin_, m.line + 1, m.column + 1, what);
  }

  void require_map(const YAML::Node& n, const char* what) const {
    if (!n.IsMap()) fail(n, fmt::format("'{}' must be a mapping", what));
  }

  void allow_keys(const YAML::Node& n, const char* block, std::initializer_list<const char*> keys) const {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : n) {
      const std::string k = kv.first.as<std::string>();
      if (!ok.count(k)) {
        std::string list;
        for (const auto& s : ok) list += (list.empty() ? "" : ", ") + s;
        fail(kv.first, fmt::format("unknown key '{}' in {} (expected one of: {})", k, block, list));
      }
    }
  }

  // Numbers, "inf", and multiples of pi written as "8pi" or "8*pi".
  double number(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar()) fail(n, fmt::format("'{}' must be a number", what));
    std::string s = n.Scalar();
    if (s == "inf" || s == ".inf" || s == "+inf" || s == "infinity") return kInf;
    double scale = 1;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
      scale = std::numbers::pi;
      s.resize(s.size() - 2);
      while (!s.empty() && (s.back() == '*' || s.back() == ' ')) s.pop_back();
      if (s.empty()) return scale;
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      fail(n, fmt::format("'{}': cannot read '{}' as a number", what, n.Scalar()));
    return v * scale;
  }

  int integer(const YAML::Node& n, const char* what) const {
    const double v = number(n, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(n, fmt::format("'{}' must be an integer", what));
    return static_cast<int>(v);
  }

  bool boolean(const YAML::Node& n, const char* what) const {
    bool b = false;
    if (!n.IsScalar() || !YAML::convert<bool>::decode(n, b)) fail(n, fmt::format("'{}' must be true or false", what));
    return b;
  }

  std::string text(const YAML::Node& n, const char* what) const {
    if (!n.IsScalar()) fail(n, fmt::format("'{}' must be a string", what));
    return n.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& n, const char* what) const {
    if (n.IsScalar()) return {number(n, what)};
    if (!n.IsSequence()) fail(n, fmt::format("'{}' must be a number or a list of numbers", what));
    std::vector<double> out;
    for (const auto& e : n) out.push_back(number(e, what));
    return out;
  }

  std::vector<int> integers(const YAML::Node& n, const char* what) const {
    std::vector<int> out;
    if (n.IsScalar()) return {integer(n, what)};
    if (!n.IsSequence()) fail(n, fmt::format("'{}' must be an integer or a list of integers", what));
    for (const auto& e : n) out.push_back(integer(e, what));
    return out;
  }

  // A real number or [re, im].
  cplx complex(const YAML::Node& n, const char* what) const {
    if (n.IsScalar()) return {number(n, what), 0.0};
    if (n.IsSequence() && n.size() == 2) return {number(n[0], what), number(n[1], what)};
    fail(n, fmt::format("'{}' must be a number or a pair [re, im]", what));
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

void read_grid(const Reader& rd, const YAML::Node& n, RunConfig& c) {
  rd.require_map(n, "grid");
  rd.allow_keys(n, "grid", {"dim", "N", "L", "T", "steps"});
  GridSpec& g = c.grid;
  if (n["dim"]) g.dim = rd.integer(n["dim"], "grid.dim");
  if (g.dim < 1 || g.dim > kMaxDim) rd.fail(n["dim"] ? n["dim"] : n, "grid.dim must be 1, 2 or 3");
  if (n["N"]) {
    const auto v = rd.integers(n["N"], "grid.N");
    if (v.size() != 1 && static_cast<int>(v.size()) != g.dim) rd.fail(n["N"], "grid.N needs one entry or one per axis");
    for (int a = 0; a < kMaxDim; ++a) g.points[a] = v.size() == 1 ? v[0] : (a < g.dim ? v[a] : v[0]);
  }
  if (n["L"]) {
    const auto v = rd.numbers(n["L"], "grid.L");
    if (v.size() != 1 && static_cast<int>(v.size()) != g.dim) rd.fail(n["L"], "grid.L needs one entry or one per axis");
    for (int a = 0; a < kMaxDim; ++a) g.length[a] = v.size() == 1 ? v[0] : (a < g.dim ? v[a] : v[0]);
  }
  if (n["T"]) g.horizon = rd.number(n["T"], "grid.T");
  if (n["steps"]) g.time_steps = rd.integer(n["steps"], "grid.steps");
  try {
    g.validate();
  } catch (const std::exception& e) {
    rd.fail(n, e.what());
  }
}

Monomial read_monomial(const Reader& rd, const YAML::Node& n, int dim) {
  rd.require_map(n, "nonlinearity.terms[]");
  rd.allow_keys(n, "a nonlinearity term", {"coeff", "factors"});
  Monomial m;
  if (n["coeff"]) m.coeff = rd.complex(n["coeff"], "coeff");
  const YAML::Node fs = n["factors"];
  if (!fs || !fs.IsSequence() || fs.size() == 0) rd.fail(fs ? fs : n, "a term needs a non-empty 'factors' list");
  for (const auto& f : fs) {
    Factor fac;
    if (!f.IsNull()) {
      rd.require_map(f, "factor");
      rd.allow_keys(f, "a factor", {"alpha", "conjugate"});
      if (f["alpha"]) {
        const auto a = rd.integers(f["alpha"], "alpha");
        if (static_cast<int>(a.size()) != dim) rd.fail(f["alpha"], fmt::format("alpha needs {} entries", dim));
        for (int i = 0; i < dim; ++i) {
          if (a[i] < 0) rd.fail(f["alpha"], "alpha entries must be nonnegative");
          fac.alpha[i] = a[i];
        }
      }
      if (f["conjugate"]) fac.conjugate = rd.boolean(f["conjugate"], "conjugate");
    }
    m.factors.push_back(fac);
  }
  return m;
}

void read_nonlinearity(const Reader& rd, const YAML::Node& n, RunConfig& c) {
  rd.require_map(n, "physics.nonlinearity");
  rd.allow_keys(n, "physics.nonlinearity", {"form", "lambda", "kappa", "terms", "m", "M", "strict"});
  const std::string form = n["form"] ? rd.text(n["form"], "form") : "simple";
  const bool strict = n["strict"] ? rd.boolean(n["strict"], "strict") : true;
  const int d = c.grid.dim;
  NonlinearitySpec s;
  if (form == "simple") {
    std::vector<cplx> lambda(d, 1.0);
    std::vector<int> kappa(d, 4);
    if (n["lambda"]) {
      const YAML::Node l = n["lambda"];
      if (!l.IsSequence() || static_cast<int>(l.size()) != d)
        rd.fail(l, fmt::format("lambda needs {} entries (number or [re, im])", d));
      for (int i = 0; i < d; ++i) lambda[i] = rd.complex(l[i], "lambda");
    }
    if (n["kappa"]) {
      kappa = rd.integers(n["kappa"], "kappa");
      if (kappa.size() == 1) kappa.assign(d, kappa[0]);
      if (static_cast<int>(kappa.size()) != d) rd.fail(n["kappa"], fmt::format("kappa needs {} entries", d));
    }
    if (n["terms"] || n["m"] || n["M"]) rd.fail(n, "'terms', 'm' and 'M' belong to form: general");
    s = NonlinearitySpec::simple(lambda, kappa, strict);
  } else if (form == "general") {
    if (!n["terms"] || !n["terms"].IsSequence()) rd.fail(n, "form: general needs a 'terms' list");
    std::vector<Monomial> terms;
    for (const auto& t : n["terms"]) terms.push_back(read_monomial(rd, t, d));
    const int m = n["m"] ? rd.integer(n["m"], "m") : 2;
    const int M = n["M"] ? rd.integer(n["M"], "M") : m;
    if (n["lambda"] || n["kappa"]) rd.fail(n, "'lambda' and 'kappa' belong to form: simple");
    s = NonlinearitySpec::general(std::move(terms), m, M, strict);
  } else {
    rd.fail(n["form"], fmt::format("unknown nonlinearity form '{}' (simple or general)", form));
  }
  try {
    s.validate(d);
  } catch (const std::exception& e) {
    rd.fail(n, e.what());
  }
  c.nonlinearity = std::move(s);
}

void read_physics(const Reader& rd, const YAML::Node& n, RunConfig& c) {
  rd.require_map(n, "physics");
  rd.allow_keys(n, "physics", {"eps", "nonlinearity", "initial", "iterates"});
  if (n["eps"]) {
    c.eps = rd.integers(n["eps"], "physics.eps");
    if (c.eps.empty()) rd.fail(n["eps"], "physics.eps must not be empty");
    for (int e : c.eps)
      if (e != 0 && e != 1) rd.fail(n["eps"], "physics.eps entries must be 0 or 1");
  }
  if (n["nonlinearity"]) read_nonlinearity(rd, n["nonlinearity"], c);
  if (n["iterates"]) {
    c.iterates = rd.integer(n["iterates"], "physics.iterates");
    if (c.iterates < 3) rd.fail(n["iterates"], "physics.iterates must be at least 3");
  }
  if (const YAML::Node in = n["initial"]) {
    rd.require_map(in, "physics.initial");
    rd.allow_keys(in, "physics.initial", {"shape", "width", "delta", "file"});
    if (in["shape"]) c.initial.shape = rd.text(in["shape"], "shape");
    if (in["width"]) c.initial.width = rd.number(in["width"], "width");
    if (in["delta"]) c.initial.delta = rd.number(in["delta"], "delta");
    if (in["file"]) {
      c.initial.file = rd.text(in["file"], "file");
      if (!in["shape"]) c.initial.shape = "file";
    }
    const std::string& sh = c.initial.shape;
    if (sh != "gaussian" && sh != "zero" && sh != "file")
      rd.fail(in["shape"], fmt::format("unknown initial shape '{}' (gaussian, zero or file)", sh));
    if (sh == "file" && c.initial.file.empty()) rd.fail(in, "shape: file needs a 'file' path");
    if (!(c.initial.width > 0)) rd.fail(in["width"], "width must be positive");
  }
}

ProbeRequest read_probe(const Reader& rd, const YAML::Node& n) {
  ProbeRequest r;
  if (n.IsScalar()) {
    r.name = n.Scalar();
  } else {
    rd.require_map(n, "probes[]");
    rd.allow_keys(n, "a probe entry", {"name", "params", "tolerance", "sensitivity"});
    if (!n["name"]) rd.fail(n, "a probe entry needs a 'name'");
    r.name = rd.text(n["name"], "name");
    if (const YAML::Node p = n["params"]) {
      rd.require_map(p, "params");
      for (const auto& kv : p) {
        const std::string key = kv.first.as<std::string>();
        r.params.set(key, rd.numbers(kv.second, key.c_str()));
      }
    }
    if (n["tolerance"]) r.tolerance = rd.number(n["tolerance"], "tolerance");
    if (n["sensitivity"]) r.sensitivity = rd.boolean(n["sensitivity"], "sensitivity");
  }
  const ProbeEntry* e = find_probe(r.name);
  if (!e) {
    std::string list;
    for (const auto& s : probe_names()) list += (list.empty() ? "" : ", ") + s;
    rd.fail(n, fmt::format("unknown probe '{}' (valid: {})", r.name, list));
  }
  r.name = e->name;
  return r;
}

void read_probes(const Reader& rd, const YAML::Node& n, RunConfig& c) {
  if (n.IsScalar() && n.Scalar() == "all") {
    for (const auto& name : default_suite()) c.probes.push_back({name, {}, {}, true});
    return;
  }
  if (n.IsNull()) return;
  if (!n.IsSequence()) rd.fail(n, "'probes' must be a list or the word all");
  for (const auto& e : n) c.probes.push_back(read_probe(rd, e));
}

void read_io(const Reader& rd, const YAML::Node& n, RunConfig& c) {
  rd.require_map(n, "io");
  rd.allow_keys(n, "io", {"out", "dump_fields", "dump_times", "series_points"});
  if (n["out"]) c.io.out = rd.text(n["out"], "io.out");
  if (n["dump_fields"]) c.io.dump_fields = rd.boolean(n["dump_fields"], "io.dump_fields");
  if (n["dump_times"]) c.io.dump_times = rd.numbers(n["dump_times"], "io.dump_times");
  if (n["series_points"]) {
    c.io.series_points = rd.integer(n["series_points"], "io.series_points");
    if (c.io.series_points < 1) rd.fail(n["series_points"], "io.series_points must be positive");
  }
}

}  // namespace

ProbeRequest RunConfig::request(const std::string& name) const {
  const ProbeEntry* e = find_probe(name);
  if (!e) throw std::invalid_argument("unknown probe '" + name + "'");
  for (const auto& p : probes)
    if (p.name == e->name) return p;
  return {e->name, {}, {}, true};
}

ProbeContext RunConfig::context(const ProbeRequest& req) const {
  ProbeContext ctx;
  ctx.grid = grid;
  ctx.eps = eps;
  ctx.seed = seed;
  ctx.params = req.params;
  if (req.tolerance) ctx.params.set(find_probe(req.name)->tolerance_key, *req.tolerance);
  return ctx;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  RunConfig c;
  if (root.IsNull()) return c;
  rd.require_map(root, "the document");
  rd.allow_keys(root, "the top level", {"seed", "parallel", "grid", "physics", "probes", "io"});
  try {
    if (root["seed"]) {
      const double s = rd.number(root["seed"], "seed");
      if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15) rd.fail(root["seed"], "seed must be a nonnegative integer");
      c.seed = static_cast<std::uint64_t>(s);
    }
    if (root["parallel"]) {
      c.parallel = rd.integer(root["parallel"], "parallel");
      if (c.parallel < 1) rd.fail(root["parallel"], "parallel must be at least 1");
    }
    if (root["grid"]) read_grid(rd, root["grid"], c);
    if (root["physics"]) read_physics(rd, root["physics"], c);
    if (root["probes"]) read_probes(rd, root["probes"], c);
    if (root["io"]) read_io(rd, root["io"], c);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string default_config_text() {
  return R"(# Every key is optional; the values below are the defaults.
seed: 1                 # fixes every random field bit-exactly
parallel: 1             # probe jobs run concurrently (--parallel overrides)
grid:
  dim: 2
  N: 320                # points per axis (or one entry per axis)
  L: 8pi                # box length per axis; "8pi" and "8*pi" are accepted
  T: 1                  # solve window [0, T]
  steps: 32             # time steps of the solve window
physics:
  eps: [0, 1]           # dispersion |xi|^4 + eps |xi|^2; probes run every entry
  iterates: 5           # Picard iterates for solve
  nonlinearity:
    form: simple        # simple: sum_i lambda_i d^3_{x_i} u^{kappa_i + 1}
    lambda: [1, 1]      # number or [re, im] per axis
    kappa: [4, 4]
    strict: true        # hypothesis violations are errors rather than warnings
    # form: general
    # m: 2
    # M: 2
    # terms:
    #   - coeff: [1, 0]
    #     factors: [{alpha: [1, 0]}, {conjugate: true}, {}]
  initial:
    shape: gaussian     # gaussian | zero | file
    width: 1
    delta: 1.0e-3       # amplitude of the Gaussian
    # file: u0.mspf     # field container, used with shape: file
probes: []              # names, entries {name, params, tolerance, sensitivity}, or the word all
io:
  out: modspec-out
  dump_fields: false    # write solve snapshots as field containers
  dump_times: []        # snapshot times to dump (nearest slice)
  series_points: 16     # rows of the solve time series
)";
}

}  // namespace modspec
