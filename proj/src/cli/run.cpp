#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fftw3.h>

#include "orient/asymptotics.hpp"
#include "orient/cli.hpp"
#include "orient/contrasts.hpp"
#include "orient/cumulant3.hpp"
#include "orient/errors.hpp"
#include "orient/match.hpp"
#include "orient/montecarlo.hpp"
#include "orient/parallel.hpp"
#include "orient/simd.hpp"
#include "orient/spectra.hpp"

namespace orient::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Context {
  const RunConfig& cfg;
  fs::path dir;
  json outputs = json::array();
  json warnings = json::array();
  json summary = json::object();
  int exit_code = 0;

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.precision(17);
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

ModelParams model(const RunConfig& c) {
  ModelParams p{c.params.nu, c.params.m, c.params.theta, parse_kernel_spec(c.params.kernel)};
  p.validate();
  return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n == 1) return {hi};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

OddTestFunction make_g(const RunConfig& c) {
  if (c.contrast.g == "quadrant") return quadrant_indicator(c.grid.H);
  return default_bump(c.grid.H);
}

void cmd_simulate(Context& ctx) {
  const auto& c = ctx.cfg;
  SimulationOptions opts;
  opts.pad_tol = c.grid.pad_tol;
  const EventSeries e = simulate_window(model(c), c.grid.T, Rng(c.seed), opts);
  if (c.io.format == "csv") {
    auto out = open_out(ctx.file("events.csv"));
    out << "t\n";
    for (double t : e.times) out << t << '\n';
  } else {
    write_json(ctx.file("events.json"), {{"window_end", e.window_end}, {"times", e.times}});
  }
  ctx.summary = {{"n_events", e.times.size()},
                 {"window_end", e.window_end},
                 {"rate", static_cast<double>(e.times.size()) / e.window_end},
                 {"lambda", model(c).lambda()},
                 {"provenance", e.provenance.description}};
}

void write_grid(Context& ctx, const std::string& stem, const SpectralGrid& g) {
  if (ctx.cfg.io.format == "csv") {
    auto out = open_out(ctx.file(stem + ".csv"));
    out << (g.dims == 1 ? "w1,re,im\n" : "w1,w2,re,im\n");
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << g.w1[i] << ',';
      if (g.dims == 2) out << g.w2[i] << ',';
      out << g.values[i].real() << ',' << g.values[i].imag() << '\n';
    }
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
      json r = {{"w1", g.w1[i]}, {"re", g.values[i].real()}, {"im", g.values[i].imag()}};
      if (g.dims == 2) r["w2"] = g.w2[i];
      rows.push_back(r);
    }
    write_json(ctx.file(stem + ".json"), rows);
  }
}

void cmd_spectrum(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto ws = linspace(0.0, c.grid.w_max, c.grid.n_w);
  const SpectralGrid g = bartlett_grid(model(c), ws);
  write_grid(ctx, "spectrum", g);
  ctx.summary = {{"n", g.size()}, {"gamma_0", bartlett(model(c), 0.0)}};
}

void cmd_bispectrum(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto ax = linspace(-c.grid.w_max, c.grid.w_max, c.grid.n_w);
  const auto p = model(c);
  const SpectralGrid g = bispectrum_grid(p, ax, ax, c.grid.kind == "comp" ? BKind::Complete : BKind::Factorial,
                                         c.grid.form == "Q" ? BForm::Q : BForm::R);
  write_grid(ctx, "bispectrum", g);
  double max_im = 0.0, max_abs = 0.0;
  for (const auto& v : g.values) {
    max_im = std::max(max_im, std::fabs(v.imag()));
    max_abs = std::max(max_abs, std::abs(v));
  }
  const json meta = {{"kind", c.grid.kind}, {"form", c.grid.form},       {"n_w", c.grid.n_w},
                     {"w_max", c.grid.w_max}, {"max_abs_im", max_im},    {"max_abs", max_abs},
                     {"envelope", envelope(p)}, {"kernel", p.kernel.spec()}};
  write_json(ctx.file("bispectrum_meta.json"), meta);
  ctx.summary = meta;
}

void cmd_invert(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto p = model(c);
  const CumulantGrid g = invert_bispectrum(p, c.grid.lambda, static_cast<std::size_t>(c.grid.n));
  const CumulantGrid odd = odd_part(g);
  for (const auto& w : g.warnings) ctx.warnings.push_back(w);
  if (c.io.format == "csv") {
    auto out = open_out(ctx.file("cumulant.csv"));
    out << "tau1,tau2,c3,c3_odd\n";
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j)
        out << g.tau(i) << ',' << g.tau(j) << ',' << g.at(i, j) << ',' << odd.at(i, j) << '\n';
  } else {
    write_json(ctx.file("cumulant.json"), {{"tau", [&] {
                                              std::vector<double> t(g.n);
                                              for (std::size_t i = 0; i < g.n; ++i) t[i] = g.tau(i);
                                              return t;
                                            }()},
                                           {"c3", g.values},
                                           {"c3_odd", odd.values}});
  }
  const json meta = {{"Lambda", g.half_width},
                     {"n", g.n},
                     {"spacing", g.spacing},
                     {"kernel", p.kernel.spec()},
                     {"nu", p.nu},
                     {"m", p.m},
                     {"theta", p.theta},
                     {"imag_residue", g.imag_residue},
                     {"alias_fraction", g.alias_fraction},
                     {"integral", g.integral()},
                     {"b_fac_00", b_factorial(p, 0.0, 0.0).real()},
                     {"H", c.grid.H},
                     {"D_H", contrast_mass_DH(g, c.grid.H)},
                     {"odd_l1", contrast_mass_DH(g, g.half_width)},
                     {"warnings", g.warnings}};
  write_json(ctx.file("cumulant_meta.json"), meta);
  ctx.summary = meta;
}

void cmd_match(Context& ctx) {
  const auto& c = ctx.cfg;
  MatchSpec spec{parse_kernel_spec(c.params.kernel), c.params.m, 1e-12, c.grid.rho_spacing};
  const MatchModel model(spec);
  const double top = std::min(model.base().tail_quantile(1e-8), 4000.0 * c.grid.rho_spacing);
  const auto n = static_cast<std::size_t>(std::ceil(top / c.grid.rho_spacing)) + 1;
  std::vector<double> xs(n), rho(n);
  parallel_for(n, [&](std::size_t i) {
    xs[i] = static_cast<double>(i) * c.grid.rho_spacing;
    rho[i] = model.rho_density(xs[i]);
  });
  const std::vector<double> pn(model.pn().begin(), model.pn().end());
  const json doc = {{"metadata",
                     {{"base", spec.base.spec()},
                      {"m", spec.m},
                      {"pn_truncation_eps", spec.pn_truncation_eps},
                      {"rho_spacing", c.grid.rho_spacing},
                      {"kernel", "match:" + spec.base.spec() + ":" + std::to_string(spec.m)}}},
                    {"rho", {{"x", xs}, {"density", rho}}},
                    {"pn", pn}};
  fs::path out = c.io.out.empty() ? ctx.file("match.json") : fs::path(c.io.out);
  if (!c.io.out.empty()) ctx.outputs.push_back(out.string());
  write_json(out, doc);
  ctx.summary = {{"out", out.string()}, {"n_rho", n}, {"n_pn", pn.size()}, {"p1", pn.front()}};
}

void cmd_contrast(Context& ctx) {
  const auto& c = ctx.cfg;
  const OddTestFunction g = make_g(c);
  if (c.subcommand == "run") {
    std::vector<std::string> warns;
    const EventSeries e = ingest_events(c.io.events, c.io.window_end, &warns);
    const double stat = e.times.empty() ? 0.0 : contrast_statistic(e, g, &warns);
    for (auto& w : warns) ctx.warnings.push_back(w);
    ctx.summary = {{"statistic", stat}, {"n_events", e.times.size()}, {"window_end", e.window_end},
                   {"H", c.grid.H},     {"g", c.contrast.g},          {"warnings", warns}};
    write_json(ctx.file("contrast_run.json"), ctx.summary);
    return;
  }
  const auto p = model(c);
  SimulationOptions sim;
  sim.pad_tol = c.grid.pad_tol;
  const LinearityScan s =
      linearity_scan(p, g, c.grid.T, c.contrast.thetas, static_cast<std::size_t>(c.contrast.reps), Rng(c.seed), sim);
  json r = {{"theta", s.theta},
            {"mean", s.mean},
            {"std_err", s.std_err},
            {"slope", s.slope},
            {"slope_se", s.slope_se},
            {"slope_z_vs_zero", s.slope_se > 0 ? s.slope / s.slope_se : 0.0},
            {"intercept", s.intercept},
            {"intercept_se", s.intercept_se},
            {"intercept_z", s.intercept_se > 0 ? s.intercept / s.intercept_se : 0.0},
            {"replicates", s.replicates},
            {"T", c.grid.T},
            {"H", c.grid.H},
            {"g", c.contrast.g},
            {"kernel", p.kernel.spec()}};
  if (c.contrast.exact) {
    ModelParams forward = p;
    forward.theta = 1.0;
    const CumulantGrid grid = invert_bispectrum(forward, c.grid.lambda, static_cast<std::size_t>(c.grid.n));
    for (const auto& w : grid.warnings) ctx.warnings.push_back(w);
    const ExactMean em = exact_mean(forward, g, c.grid.T, grid);
    r["mu_T"] = em.mu_T;
    r["mu_inf"] = em.mu_inf;
    r["gap_bound"] = em.gap_bound;
    r["slope_z_vs_mu_T"] = s.slope_se > 0 ? (s.slope - em.mu_T) / s.slope_se : 0.0;
  }
  write_json(ctx.file("contrast_scan.json"), r);
  ctx.summary = r;
}

void cmd_mc(Context& ctx) {
  const auto& c = ctx.cfg;
  const ValidationReport rep = validate(parse_suite(c.mc.suite), parse_level(c.mc.level), c.seed, model(c));
  json rows = json::array();
  for (const auto& cmp : rep.comparisons)
    rows.push_back({{"name", cmp.name},
                    {"observed", cmp.observed},
                    {"expected", cmp.expected},
                    {"std_err", cmp.std_err},
                    {"z", cmp.z},
                    {"band", cmp.k},
                    {"pass", cmp.pass}});
  const json r = {{"suite", to_string(rep.suite)}, {"level", to_string(rep.level)}, {"seed", rep.seed},
                  {"pass", rep.all_pass()},        {"comparisons", rows}};
  write_json(ctx.file("mc_" + c.mc.suite + ".json"), r);
  ctx.summary = r;
  if (!rep.all_pass()) ctx.exit_code = 1;
}

void cmd_asym(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto p = model(c);
  std::vector<double> ts;
  const double l0 = std::log(c.grid.t_max), l1 = std::log(c.grid.t_min);
  for (int i = 0; i < c.grid.n_t; ++i)
    ts.push_back(c.grid.n_t == 1 ? c.grid.t_min : std::exp(l0 + (l1 - l0) * i / (c.grid.n_t - 1)));
  const KernelTailClass tail = classify_tail(p.kernel);
  const DiagReport rep = diag_limit_check(p, tail, ts);
  json rows = json::array();
  for (const auto& e : rep.entries) {
    json row = {{"t", e.t}, {"im_b", e.im_b}, {"scaled", e.scaled}, {"underflow", e.underflow}};
    row["ratio"] = std::isfinite(e.ratio) ? json(e.ratio) : json(nullptr);
    rows.push_back(row);
  }
  json r = {{"kernel", p.kernel.spec()},
            {"route", rep.route},
            {"exponent", rep.exponent},
            {"entries", rows},
            {"monotone_approach", rep.monotone_approach},
            {"converged", rep.converged},
            {"divergent", rep.divergent},
            {"all_underflow", rep.all_underflow}};
  r["limit"] = std::isfinite(rep.limit) ? json(rep.limit) : json("inf");
  r["ratio_at_min"] = std::isfinite(rep.ratio_at_min) ? json(rep.ratio_at_min) : json(nullptr);
  if (rep.all_underflow) ctx.warnings.push_back("NumericalUnderflow: |Im B(t,t)| below 1e-14 at every t");
  write_json(ctx.file("asym_check.json"), r);
  ctx.summary = r;
}

std::string operation(const RunConfig& c) {
  if (c.command == "simulate") return "simulate.simulate_window";
  if (c.command == "spectrum") return "spectra.bartlett";
  if (c.command == "bispectrum") return c.grid.kind == "comp" ? "spectra.b_complete" : "spectra.b_factorial";
  if (c.command == "invert") return "cumulant3.invert_bispectrum";
  if (c.command == "match") return "match.build_matched_kernel";
  if (c.command == "contrast") return c.subcommand == "run" ? "contrasts.contrast_statistic" : "contrasts.linearity_scan";
  if (c.command == "mc-validate") return "montecarlo.validate";
  return "asymptotics.diag_limit_check";
}

bool input_error(const Error& e) {
  static const std::set<std::string> kinds{"ConfigError",        "InvalidArgument",  "ParseError",
                                           "NonFiniteTime",      "HOutOfRange",      "SupportExceedsGrid",
                                           "AlphaOutOfRange",    "UnsupportedKernelScaling", "NonMonotoneKernel"};
  return kinds.count(e.kind()) > 0;
}

}  // namespace

int run(const RunConfig& c) {
  const auto errs = validate(c);
  if (!errs.empty()) {
    for (const auto& e : errs) std::cerr << "config error: " << e << '\n';
    return 2;
  }
  set_thread_count(static_cast<std::size_t>(c.threads));
  Context ctx{c, fs::path(c.io.out_dir)};
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(ctx.dir);
    if (c.command == "simulate") cmd_simulate(ctx);
    else if (c.command == "spectrum") cmd_spectrum(ctx);
    else if (c.command == "bispectrum") cmd_bispectrum(ctx);
    else if (c.command == "invert") cmd_invert(ctx);
    else if (c.command == "match") cmd_match(ctx);
    else if (c.command == "contrast") cmd_contrast(ctx);
    else if (c.command == "mc-validate") cmd_mc(ctx);
    else cmd_asym(ctx);
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "] in " << operation(c) << ": " << e.what() << '\n';
    return input_error(e) ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error [IO] in " << operation(c) << ": " << e.what() << '\n';
    return 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json manifest = {{"config", to_json(c)},
                         {"seed", c.seed},
                         {"versions",
                          {{"orient", kVersion},
                           {"compiler", __VERSION__},
                           {"fftw", std::string(fftw_version)},
                           {"simd_backend", std::string(simd::name(simd::active().backend))}}},
                         {"wall_time_s", wall},
                         {"outputs", ctx.outputs},
                         {"warnings", ctx.warnings},
                         {"exit_code", ctx.exit_code}};
  write_json(ctx.dir / "manifest.json", manifest);
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
  std::cout << ctx.summary.dump(2) << '\n';
  return ctx.exit_code;
}

int main_entry(int argc, char** argv) {
  try {
    const auto cfg = parse_args(argc, argv);
    if (!cfg) return 0;
    return run(*cfg);
  } catch (const ConfigError& e) {
    std::istringstream lines(e.what());
    for (std::string l; std::getline(lines, l);) std::cerr << "config error: " << l << '\n';
    return 2;
  }
}

}  // namespace orient::cli
