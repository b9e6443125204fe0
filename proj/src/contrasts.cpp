#include "orient/contrasts.hpp"

#include <cmath>

#include "orient/errors.hpp"
#include "orient/parallel.hpp"

namespace orient {

double contrast_statistic(const EventSeries& e, const OddTestFunction& g, std::vector<std::string>* warnings) {
  const auto& x = e.times;
  const std::size_t n = x.size();
  if (n < 3) {
    if (warnings) warnings->push_back("EmptyWindow: fewer than three events");
    return 0.0;
  }
  if (!(e.window_end > 0.0)) throw InvalidArgument("window end must be positive");
  const double H = g.support_radius();
  double acc = 0.0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t a = 0; a < n; ++a) {
    while (std::fabs(x[lo] - x[a]) > H) ++lo;
    if (hi < a) hi = a;
    while (hi + 1 < n && std::fabs(x[hi + 1] - x[a]) <= H) ++hi;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == a) continue;
      const double t1 = x[j] - x[a];
      for (std::size_t k = lo; k <= hi; ++k) {
        if (k == a || k == j) continue;
        acc += g(t1, x[k] - x[a]);
      }
    }
  }
  return acc / e.window_end;
}

ExactMean exact_mean(const ModelParams& p, const OddTestFunction& g, double T, const CumulantGrid& c3) {
  if (!(T > 0.0)) throw InvalidArgument("window length T must be positive");
  const double H = g.support_radius();
  if (H > c3.half_width) throw SupportExceedsGrid("test function support exceeds the lag grid half width");
  if (c3.theta != 1.0) throw InvalidArgument("exact_mean needs a cumulant grid inverted at theta = 1");
  const CumulantGrid odd = odd_part(c3);
  double mu_t = 0.0, mu_inf = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < odd.n; ++i) {
    const double t1 = odd.tau(i);
    for (std::size_t j = 0; j < odd.n; ++j) {
      const double c = odd.at(i, j);
      l1 += std::fabs(c);
      if (std::fabs(t1) > H) continue;
      const double t2 = odd.tau(j);
      if (std::fabs(t2) > H) continue;
      const double gv = g(t1, t2) * c;
      const double span = std::max({0.0, t1, t2}) - std::min({0.0, t1, t2});
      mu_t += gv * std::max(0.0, T - span) / T;
      mu_inf += gv;
    }
  }
  ExactMean out;
  out.mu_T = mu_t * odd.cell();
  out.mu_inf = mu_inf * odd.cell();
  out.value = p.theta * out.mu_T;
  out.gap_bound = 2.0 * H * g.bound() * l1 * odd.cell() / T;
  return out;
}

LinearityScan linearity_scan(const ModelParams& p, const OddTestFunction& g, double T,
                             const std::vector<double>& thetas, std::size_t replicates, const Rng& rng,
                             const SimulationOptions& sim) {
  if (thetas.size() < 3) throw InvalidArgument("linearity scan needs at least three theta values");
  if (replicates < 2) throw InvalidArgument("linearity scan needs at least two replicates");
  for (double th : thetas)
    if (!(std::fabs(th) <= 1.0)) throw InvalidArgument("theta values must lie in [-1, 1]");
  LinearityScan out;
  out.theta = thetas;
  out.replicates = replicates;
  const std::size_t nt = thetas.size();
  std::vector<double> stat(nt * replicates);
  parallel_for(nt * replicates, [&](std::size_t idx) {
    const std::size_t i = idx / replicates, r = idx % replicates;
    ModelParams q = p;
    q.theta = thetas[i];
    const EventSeries e = simulate_window(q, T, rng.split((static_cast<std::uint64_t>(i) << 32) | r), sim);
    stat[idx] = contrast_statistic(e, g);
  });
  for (std::size_t i = 0; i < nt; ++i) {
    double s = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) s += stat[i * replicates + r];
    const double mean = s / static_cast<double>(replicates);
    double ss = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) ss += std::pow(stat[i * replicates + r] - mean, 2);
    out.mean.push_back(mean);
    out.std_err.push_back(std::sqrt(ss / static_cast<double>(replicates - 1) / static_cast<double>(replicates)));
  }
  double tbar = 0.0;
  for (double th : thetas) tbar += th;
  tbar /= static_cast<double>(nt);
  double sxx = 0.0;
  for (double th : thetas) sxx += (th - tbar) * (th - tbar);
  if (!(sxx > 0.0)) throw InvalidArgument("theta values must not all coincide");
  double slope = 0.0, slope_var = 0.0, icpt = 0.0, icpt_var = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    const double ws = (thetas[i] - tbar) / sxx;
    const double wi = 1.0 / static_cast<double>(nt) - tbar * ws;
    const double v = out.std_err[i] * out.std_err[i];
    slope += ws * out.mean[i];
    slope_var += ws * ws * v;
    icpt += wi * out.mean[i];
    icpt_var += wi * wi * v;
  }
  out.slope = slope;
  out.slope_se = std::sqrt(slope_var);
  out.intercept = icpt;
  out.intercept_se = std::sqrt(icpt_var);
  return out;
}

}  // namespace orient
