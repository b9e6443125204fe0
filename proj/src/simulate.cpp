#include "orient/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "orient/errors.hpp"

namespace orient {

void ModelParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("immigrant rate nu must be positive");
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("branching ratio m must lie in (0, 1)");
  if (!(std::fabs(theta) <= 1.0)) throw InvalidArgument("sign bias theta must lie in [-1, 1]");
}

Cluster sample_cluster(double m, const Kernel& kernel, Rng& rng, ClusterLimits limits) {
  if (!(m > 0.0 && m < 1.0)) throw InvalidArgument("branching ratio m must lie in (0, 1)");
  if (limits.size_cap < 1) throw InvalidArgument("size cap must be at least 1");
  std::poisson_distribution<std::size_t> offspring(m);
  Cluster c;
  c.times.push_back(0.0);
  c.parent.push_back(-1);
  std::vector<std::size_t> generation{0};
  for (std::size_t head = 0; head < c.times.size(); ++head) {
    const std::size_t k = offspring(rng);
    if (k == 0) continue;
    if (generation[head] + 1 > limits.generation_cap)
      throw ClusterSizeCapExceeded("generation cap " + std::to_string(limits.generation_cap) + " exceeded");
    if (c.times.size() + k > limits.size_cap)
      throw ClusterSizeCapExceeded("cluster size cap " + std::to_string(limits.size_cap) + " exceeded");
    for (std::size_t j = 0; j < k; ++j) {
      c.times.push_back(c.times[head] + kernel.sample(rng));
      c.parent.push_back(static_cast<std::int64_t>(head));
      generation.push_back(generation[head] + 1);
    }
  }
  return c;
}

Cluster flip_cluster(const Cluster& c, int s) {
  if (s != 1 && s != -1) throw InvalidArgument("flip sign must be +1 or -1");
  Cluster out = c;
  if (s == -1)
    for (double& t : out.times) t = -t;
  out.sign = c.sign * s;
  return out;
}

double default_padding(const ModelParams& p, double pad_tol) {
  const double gens = std::ceil(3.0 / (1.0 - p.m));
  return p.kernel.tail_quantile(pad_tol) * gens;
}

EventSeries simulate_window(const ModelParams& p, double T, const Rng& rng, const SimulationOptions& opts) {
  p.validate();
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("window length T must be positive");
  const double P = opts.padding ? *opts.padding : default_padding(p, opts.pad_tol);
  if (!(P >= 0.0) || !std::isfinite(P)) throw InvalidArgument("padding must be finite and nonnegative");

  Rng count_rng = rng.split(~0ULL);
  std::poisson_distribution<std::uint64_t> immigrants(p.nu * (T + 2.0 * P));
  const std::uint64_t n_imm = immigrants(count_rng);
  const double p_plus = 0.5 * (1.0 + p.theta);

  struct Tagged {
    double t;
    std::uint64_t cluster;
    double root;
    int sign;
  };
  std::vector<Tagged> kept;
  kept.reserve(static_cast<std::size_t>(p.lambda() * T * 1.1) + 16);
  for (std::uint64_t j = 0; j < n_imm; ++j) {
    Rng sub = rng.split(j);
    const double root = -P + (T + 2.0 * P) * sub.uniform();
    const int sign = sub.uniform() < p_plus ? 1 : -1;
    const Cluster c = sample_cluster(p.m, p.kernel, sub, opts.limits);
    for (double x : c.times) {
      const double t = root + sign * x;
      if (t >= 0.0 && t <= T) kept.push_back({t, j, root, sign});
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Tagged& a, const Tagged& b) { return a.t < b.t; });

  EventSeries out;
  out.window_end = T;
  out.provenance.kind = Provenance::Kind::Simulated;
  out.provenance.seed = rng.key();
  std::ostringstream desc;
  desc.precision(17);
  desc << "nu=" << p.nu << " m=" << p.m << " theta=" << p.theta << " kernel=" << p.kernel.spec() << " T=" << T
       << " P=" << P;
  out.provenance.description = desc.str();
  out.times.reserve(kept.size());
  for (const auto& e : kept) out.times.push_back(e.t);
  if (opts.keep_genealogy) {
    for (const auto& e : kept) {
      out.cluster_index.push_back(e.cluster);
      out.cluster_root.push_back(e.root);
      out.cluster_sign.push_back(e.sign);
    }
  }
  return out;
}

EventSeries ingest_events(const std::filesystem::path& path, std::optional<double> window_end,
                          std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  EventSeries out;
  out.provenance.kind = Provenance::Kind::Ingested;
  out.provenance.description = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    const std::string tok = line.substr(first, last - first + 1);
    if (out.times.empty() && tok == "t") continue;
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::out_of_range&) {
      throw NonFiniteTime(path.string() + ":" + std::to_string(lineno) + ": time out of range");
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": cannot parse '" + tok + "'");
    if (!std::isfinite(v)) throw NonFiniteTime(path.string() + ":" + std::to_string(lineno) + ": non-finite time");
    if (v < 0.0) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": negative time");
    out.times.push_back(v);
  }
  std::sort(out.times.begin(), out.times.end());
  if (out.times.empty()) {
    out.window_end = window_end.value_or(0.0);
    if (warnings) warnings->push_back(path.string() + ": no events");
    return out;
  }
  const double tmax = out.times.back();
  if (window_end) {
    if (*window_end < tmax) throw InvalidArgument("window end precedes the last event time");
    out.window_end = *window_end;
  } else {
    out.window_end = tmax;
  }
  return out;
}

}  // namespace orient
