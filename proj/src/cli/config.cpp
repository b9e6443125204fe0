#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "orient/cli.hpp"
#include "orient/errors.hpp"
#include "orient/kernels.hpp"

namespace orient::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"simulate", "spectrum",    "bispectrum", "invert",
                                         "match",    "contrast",    "mc-validate", "asym-check"};

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Reads j[key] into `out` if present; type mismatches become violations.
template <class T>
void read(const json& j, const char* key, const std::string& path, T& out, std::vector<std::string>& errs) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    errs.push_back(path + "." + key + ": wrong type");
  }
}

void unknown_keys(const json& j, const std::string& path, std::set<std::string> known,
                  std::vector<std::string>& errs) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) errs.push_back((path.empty() ? "" : path + ".") + it.key() + ": unknown field");
}

const json& section(const json& j, const char* key, std::vector<std::string>& errs) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) {
    errs.push_back(std::string(key) + ": expected an object");
    return empty;
  }
  return j.at(key);
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["subcommand"] = c.subcommand;
  j["params"] = {{"nu", c.params.nu}, {"m", c.params.m}, {"theta", c.params.theta}, {"kernel", c.params.kernel}};
  j["io"] = {{"out_dir", c.io.out_dir}, {"format", c.io.format}, {"events", c.io.events}, {"out", c.io.out}};
  j["io"]["window_end"] = c.io.window_end ? json(*c.io.window_end) : json(nullptr);
  const auto& g = c.grid;
  j["grid"] = {{"T", g.T},           {"pad_tol", g.pad_tol}, {"w_max", g.w_max}, {"n_w", g.n_w},
               {"kind", g.kind},     {"form", g.form},       {"lambda", g.lambda}, {"n", g.n},
               {"H", g.H},           {"t_min", g.t_min},     {"t_max", g.t_max}, {"n_t", g.n_t},
               {"rho_spacing", g.rho_spacing}};
  j["contrast"] = {{"g", c.contrast.g}, {"thetas", c.contrast.thetas}, {"reps", c.contrast.reps},
                   {"exact", c.contrast.exact}};
  j["mc"] = {{"suite", c.mc.suite}, {"level", c.mc.level}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  const bool known = std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end();
  if (!known) e.push_back("command: unknown command '" + c.command + "' (valid: " + join(kCommands) + ")");
  if (c.command == "match" && c.subcommand != "build") e.push_back("subcommand: match expects 'build'");
  if (c.command == "contrast" && c.subcommand != "run" && c.subcommand != "scan")
    e.push_back("subcommand: contrast expects 'run' or 'scan'");

  const auto& p = c.params;
  if (!(p.nu > 0.0) || !std::isfinite(p.nu)) e.push_back("params.nu: immigrant rate must be positive");
  if (!(p.m > 0.0 && p.m < 1.0)) e.push_back("params.m: branching ratio must lie in (0, 1)");
  if (!(std::fabs(p.theta) <= 1.0)) e.push_back("params.theta: sign bias must lie in [-1, 1]");
  try {
    (void)parse_kernel_spec(p.kernel);
  } catch (const Error& err) {
    e.push_back("params.kernel: " + std::string(err.what()));
  }

  if (c.io.format != "csv" && c.io.format != "json") e.push_back("io.format: expected csv or json");
  if (c.io.out_dir.empty()) e.push_back("io.out_dir: must not be empty");
  if (c.io.window_end && !(*c.io.window_end >= 0.0)) e.push_back("io.window_end: must be nonnegative");

  const auto& g = c.grid;
  if (!(g.T > 0.0) || !std::isfinite(g.T)) e.push_back("grid.T: window length must be positive");
  if (!(g.pad_tol > 0.0 && g.pad_tol < 1.0)) e.push_back("grid.pad_tol: must lie in (0, 1)");
  if (!(g.w_max > 0.0)) e.push_back("grid.w_max: must be positive");
  if (g.n_w < 1) e.push_back("grid.n_w: must be at least 1");
  if (g.kind != "comp" && g.kind != "fac") e.push_back("grid.kind: expected comp or fac");
  if (g.form != "R" && g.form != "Q") e.push_back("grid.form: expected R or Q");
  if (!(g.lambda > 0.0)) e.push_back("grid.lambda: must be positive");
  if (g.n < 64 || !is_power_of_two(g.n)) e.push_back("grid.n: must be a power of two >= 64");
  if (!(g.H > 0.0)) e.push_back("grid.H: must be positive");
  if ((c.command == "invert" || (c.command == "contrast" && c.contrast.exact)) && g.H > g.lambda)
    e.push_back("grid.H: must not exceed grid.lambda");
  if (!(g.t_min > 0.0)) e.push_back("grid.t_min: must be positive");
  if (!(g.t_max > g.t_min)) e.push_back("grid.t_max: must exceed grid.t_min");
  if (g.n_t < 1) e.push_back("grid.n_t: must be at least 1");
  if (!(g.rho_spacing > 0.0)) e.push_back("grid.rho_spacing: must be positive");

  if (c.contrast.g != "bump" && c.contrast.g != "quadrant") e.push_back("contrast.g: expected bump or quadrant");
  for (double th : c.contrast.thetas)
    if (!(std::fabs(th) <= 1.0)) e.push_back("contrast.thetas: every value must lie in [-1, 1]");
  if (c.command == "contrast" && c.subcommand == "scan" && c.contrast.thetas.size() < 3)
    e.push_back("contrast.thetas: scan needs at least three values");
  if (c.contrast.reps < 2) e.push_back("contrast.reps: must be at least 2");
  if (c.command == "contrast" && c.subcommand == "run" && c.io.events.empty())
    e.push_back("io.events: contrast run needs an event file");

  if (c.mc.suite != "bispectrum" && c.mc.suite != "bartlett" && c.mc.suite != "moments")
    e.push_back("mc.suite: expected bispectrum, bartlett or moments");
  if (c.mc.level != "quick" && c.mc.level != "full") e.push_back("mc.level: expected quick or full");
  if (c.threads < 0) e.push_back("threads: must be nonnegative");
  return e;
}

RunConfig parse_config(const json& input) {
  const json& j = input.contains("config") && input.at("config").is_object() ? input.at("config") : input;
  std::vector<std::string> e;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  unknown_keys(j, "", {"command", "subcommand", "params", "io", "grid", "contrast", "mc", "seed", "threads"}, e);
  RunConfig c;
  read(j, "command", "", c.command, e);
  read(j, "subcommand", "", c.subcommand, e);
  read(j, "seed", "", c.seed, e);
  read(j, "threads", "", c.threads, e);

  const json& p = section(j, "params", e);
  unknown_keys(p, "params", {"nu", "m", "theta", "kernel"}, e);
  read(p, "nu", "params", c.params.nu, e);
  read(p, "m", "params", c.params.m, e);
  read(p, "theta", "params", c.params.theta, e);
  read(p, "kernel", "params", c.params.kernel, e);

  const json& io = section(j, "io", e);
  unknown_keys(io, "io", {"out_dir", "format", "events", "out", "window_end"}, e);
  read(io, "out_dir", "io", c.io.out_dir, e);
  read(io, "format", "io", c.io.format, e);
  read(io, "events", "io", c.io.events, e);
  read(io, "out", "io", c.io.out, e);
  if (io.contains("window_end") && !io.at("window_end").is_null()) {
    double v = 0.0;
    read(io, "window_end", "io", v, e);
    c.io.window_end = v;
  }

  const json& g = section(j, "grid", e);
  unknown_keys(g, "grid", {"T", "pad_tol", "w_max", "n_w", "kind", "form", "lambda", "n", "H", "t_min", "t_max",
                           "n_t", "rho_spacing"}, e);
  read(g, "T", "grid", c.grid.T, e);
  read(g, "pad_tol", "grid", c.grid.pad_tol, e);
  read(g, "w_max", "grid", c.grid.w_max, e);
  read(g, "n_w", "grid", c.grid.n_w, e);
  read(g, "kind", "grid", c.grid.kind, e);
  read(g, "form", "grid", c.grid.form, e);
  read(g, "lambda", "grid", c.grid.lambda, e);
  read(g, "n", "grid", c.grid.n, e);
  read(g, "H", "grid", c.grid.H, e);
  read(g, "t_min", "grid", c.grid.t_min, e);
  read(g, "t_max", "grid", c.grid.t_max, e);
  read(g, "n_t", "grid", c.grid.n_t, e);
  read(g, "rho_spacing", "grid", c.grid.rho_spacing, e);

  const json& ct = section(j, "contrast", e);
  unknown_keys(ct, "contrast", {"g", "thetas", "reps", "exact"}, e);
  read(ct, "g", "contrast", c.contrast.g, e);
  read(ct, "thetas", "contrast", c.contrast.thetas, e);
  read(ct, "reps", "contrast", c.contrast.reps, e);
  read(ct, "exact", "contrast", c.contrast.exact, e);

  const json& mc = section(j, "mc", e);
  unknown_keys(mc, "mc", {"suite", "level"}, e);
  read(mc, "suite", "mc", c.mc.suite, e);
  read(mc, "level", "mc", c.mc.level, e);

  for (auto& v : validate(c)) e.push_back(std::move(v));
  if (!e.empty()) throw ConfigError(join(e, "\n"));
  return c;
}

namespace {

using Pending = std::vector<std::function<void(RunConfig&)>>;

template <class T, class Setter>
CLI::Option* flag(CLI::App* app, const std::string& name, Pending& pending, Setter set, const std::string& help) {
  return app->add_option_function<T>(
      name, [&pending, set](const T& v) { pending.push_back([set, v](RunConfig& c) { set(c, v); }); }, help);
}

void model_flags(CLI::App* s, Pending& q) {
  flag<double>(s, "--nu", q, [](RunConfig& c, double v) { c.params.nu = v; }, "immigrant rate nu > 0");
  flag<double>(s, "--m", q, [](RunConfig& c, double v) { c.params.m = v; }, "branching ratio in (0, 1)");
  flag<double>(s, "--theta", q, [](RunConfig& c, double v) { c.params.theta = v; }, "sign bias in [-1, 1]");
  flag<std::string>(s, "--kernel", q, [](RunConfig& c, const std::string& v) { c.params.kernel = v; },
                    "exp:<beta> | lomax:<alpha> | uhalf:<a> | slap:<beta> | match:<base>:<m> | tab:<path>");
}

void sim_flags(CLI::App* s, Pending& q) {
  flag<double>(s, "--T", q, [](RunConfig& c, double v) { c.grid.T = v; }, "window length");
  flag<double>(s, "--pad-tol", q, [](RunConfig& c, double v) { c.grid.pad_tol = v; }, "padding leakage tolerance");
}

void freq_flags(CLI::App* s, Pending& q) {
  flag<double>(s, "--wmax", q, [](RunConfig& c, double v) { c.grid.w_max = v; }, "largest angular frequency");
  flag<int>(s, "--nw", q, [](RunConfig& c, int v) { c.grid.n_w = v; }, "frequencies per axis");
}

void lattice_flags(CLI::App* s, Pending& q) {
  flag<double>(s, "--Lambda", q, [](RunConfig& c, double v) { c.grid.lambda = v; }, "lag half width");
  flag<int>(s, "--n", q, [](RunConfig& c, int v) { c.grid.n = v; }, "lattice points per axis (power of two)");
}

void test_function_flags(CLI::App* s, Pending& q) {
  flag<std::string>(s, "--g", q, [](RunConfig& c, const std::string& v) { c.contrast.g = v; }, "bump | quadrant");
  flag<double>(s, "--H", q, [](RunConfig& c, double v) { c.grid.H = v; }, "support radius");
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, char** argv) {
  CLI::App app{"Third-order orientation spectra of branching-cluster point processes.\n"
               "Fourier convention: hat h(w) = int exp(-i w t) h(t) dt, w in radians per unit time."};
  app.require_subcommand(0, 1);
  Pending q;
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration or manifest");
  flag<std::uint64_t>(&app, "--seed", q, [](RunConfig& c, std::uint64_t v) { c.seed = v; }, "RNG seed");
  flag<int>(&app, "--threads", q, [](RunConfig& c, int v) { c.threads = v; }, "worker cap (0 = all cores)");
  flag<std::string>(&app, "--out-dir", q, [](RunConfig& c, const std::string& v) { c.io.out_dir = v; },
                    "output directory");
  flag<std::string>(&app, "--format", q, [](RunConfig& c, const std::string& v) { c.io.format = v; }, "csv | json");

  std::string command, sub;
  auto add = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  auto* sim = add("simulate", "simulate N_theta on [0, T] and write event times");
  model_flags(sim, q);
  sim_flags(sim, q);

  auto* spec = add("spectrum", "Bartlett spectrum on [0, wmax]");
  model_flags(spec, q);
  freq_flags(spec, q);

  auto* bis = add("bispectrum", "bispectrum grid on [-wmax, wmax]^2");
  model_flags(bis, q);
  freq_flags(bis, q);
  flag<std::string>(bis, "--kind", q, [](RunConfig& c, const std::string& v) { c.grid.kind = v; }, "comp | fac");
  flag<std::string>(bis, "--form", q, [](RunConfig& c, const std::string& v) { c.grid.form = v; }, "R | Q");

  auto* inv = add("invert", "reduced third cumulant density on a lag lattice");
  model_flags(inv, q);
  lattice_flags(inv, q);
  flag<double>(inv, "--H", q, [](RunConfig& c, double v) { c.grid.H = v; }, "contrast mass radius");

  auto* match = add("match", "reversible spectral match");
  match->require_subcommand(1);
  auto* build = match->add_subcommand("build", "tabulate the matched kernel to JSON");
  build->fallthrough();
  build->callback([&sub] { sub = "build"; });
  model_flags(build, q);
  flag<std::string>(build, "--out", q, [](RunConfig& c, const std::string& v) { c.io.out = v; }, "output JSON");
  flag<double>(build, "--rho-grid", q, [](RunConfig& c, double v) { c.grid.rho_spacing = v; }, "table spacing");

  auto* con = add("contrast", "odd orientation contrast");
  con->require_subcommand(1);
  auto* crun = con->add_subcommand("run", "statistic on an event file");
  crun->fallthrough();
  crun->callback([&sub] { sub = "run"; });
  test_function_flags(crun, q);
  flag<std::string>(crun, "--events", q, [](RunConfig& c, const std::string& v) { c.io.events = v; }, "event CSV");
  flag<double>(crun, "--window-end", q, [](RunConfig& c, double v) { c.io.window_end = v; }, "override T");
  auto* cscan = con->add_subcommand("scan", "simulated means across theta");
  cscan->fallthrough();
  cscan->callback([&sub] { sub = "scan"; });
  test_function_flags(cscan, q);
  flag<double>(cscan, "--nu", q, [](RunConfig& c, double v) { c.params.nu = v; }, "immigrant rate");
  flag<double>(cscan, "--m", q, [](RunConfig& c, double v) { c.params.m = v; }, "branching ratio");
  flag<std::string>(cscan, "--kernel", q, [](RunConfig& c, const std::string& v) { c.params.kernel = v; },
                    "kernel spec");
  sim_flags(cscan, q);
  lattice_flags(cscan, q);
  auto* thetas = cscan->add_option_function<std::vector<double>>(
      "--theta", [&q](const std::vector<double>& v) { q.push_back([v](RunConfig& c) { c.contrast.thetas = v; }); },
      "comma-separated theta list");
  thetas->delimiter(',');
  flag<int>(cscan, "--reps", q, [](RunConfig& c, int v) { c.contrast.reps = v; }, "replicates per theta");
  flag<bool>(cscan, "--exact", q, [](RunConfig& c, bool v) { c.contrast.exact = v; }, "also compute exact mean");

  auto mc_flags = [&](CLI::App* s) {
    model_flags(s, q);
    flag<std::string>(s, "--suite", q, [](RunConfig& c, const std::string& v) { c.mc.suite = v; },
                      "bispectrum | bartlett | moments");
    flag<std::string>(s, "--level", q, [](RunConfig& c, const std::string& v) { c.mc.level = v; }, "quick | full");
  };
  mc_flags(add("mc-validate", "Monte-Carlo validation suite"));
  auto* mc = add("mc", "Monte-Carlo oracles");
  mc->require_subcommand(1);
  auto* mcv = mc->add_subcommand("validate", "Monte-Carlo validation suite");
  mcv->fallthrough();
  mcv->callback([&sub] { sub = "validate"; });
  mc_flags(mcv);

  auto asym_flags = [&](CLI::App* s) {
    model_flags(s, q);
    flag<double>(s, "--tmin", q, [](RunConfig& c, double v) { c.grid.t_min = v; }, "smallest t");
    flag<double>(s, "--tmax", q, [](RunConfig& c, double v) { c.grid.t_max = v; }, "largest t");
    flag<int>(s, "--nt", q, [](RunConfig& c, int v) { c.grid.n_t = v; }, "points, log spaced");
  };
  asym_flags(add("asym-check", "small-frequency diagonal limit check"));
  auto* asym = add("asym", "small-frequency asymptotics");
  asym->require_subcommand(1);
  auto* asc = asym->add_subcommand("check", "small-frequency diagonal limit check");
  asc->fallthrough();
  asc->callback([&sub] { sub = "check"; });
  asym_flags(asc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  RunConfig c;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config: cannot open " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config: " + std::string(e.what()));
    }
    c = parse_config(j);
  }
  for (auto* s : app.get_subcommands()) command = s->get_name();
  if (command == "mc") command = "mc-validate", sub.clear();
  if (command == "asym") command = "asym-check", sub.clear();
  if (!command.empty()) {
    c.command = command;
    c.subcommand = sub;
  } else if (config_path.empty()) {
    throw ConfigError("command line: a subcommand is required (" + join(kCommands) + ")");
  }
  for (auto& set : q) set(c);
  const auto errs = validate(c);
  if (!errs.empty()) throw ConfigError(join(errs, "\n"));
  return c;
}

}  // namespace orient::cli
