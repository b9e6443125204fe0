#include "orient/montecarlo.hpp"

#include <cmath>

#include "orient/errors.hpp"
#include "orient/parallel.hpp"
#include "orient/simd.hpp"
#include "orient/spectra.hpp"

namespace orient {

McEstimate summarize(const std::vector<std::complex<double>>& samples, std::uint64_t seed) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("Monte-Carlo estimate needs at least two samples");
  std::complex<double> s = 0.0;
  for (const auto& v : samples) s += v;
  const std::complex<double> mean = s / static_cast<double>(n);
  double vr = 0.0, vi = 0.0;
  for (const auto& v : samples) {
    vr += (v.real() - mean.real()) * (v.real() - mean.real());
    vi += (v.imag() - mean.imag()) * (v.imag() - mean.imag());
  }
  const double dn = static_cast<double>(n);
  return {mean, std::sqrt(vr / (dn - 1.0) / dn), std::sqrt(vi / (dn - 1.0) / dn), n, seed};
}

Cluster sample_signed_cluster(const ModelParams& p, const Rng& rng, std::uint64_t i) {
  Rng sub = rng.split(i);
  const int sign = sub.uniform() < 0.5 * (1.0 + p.theta) ? 1 : -1;
  return flip_cluster(sample_cluster(p.m, p.kernel, sub), sign);
}

std::vector<McEstimate> mc_b_complete(const ModelParams& p, const std::vector<std::pair<double, double>>& pairs,
                                      std::size_t n_clusters, const Rng& rng) {
  p.validate();
  if (n_clusters < 2) throw InvalidArgument("need at least two clusters");
  const std::size_t np = pairs.size();
  std::vector<std::complex<double>> prod(np * n_clusters);
  parallel_for(n_clusters, [&](std::size_t i) {
    const Cluster c = sample_signed_cluster(p, rng, i);
    for (std::size_t q = 0; q < np; ++q) {
      const auto [a, b] = pairs[q];
      const auto w1 = simd::phase_sum(c.times, a), w2 = simd::phase_sum(c.times, b);
      const auto w3 = simd::phase_sum(c.times, -a - b);
      prod[q * n_clusters + i] = p.nu * w1 * w2 * w3;
    }
  });
  std::vector<McEstimate> out;
  for (std::size_t q = 0; q < np; ++q) {
    std::vector<std::complex<double>> s(prod.begin() + static_cast<std::ptrdiff_t>(q * n_clusters),
                                        prod.begin() + static_cast<std::ptrdiff_t>((q + 1) * n_clusters));
    out.push_back(summarize(s, rng.key()));
  }
  return out;
}

McEstimate mc_b_complete(const ModelParams& p, double w1, double w2, std::size_t n_clusters, const Rng& rng) {
  return mc_b_complete(p, std::vector<std::pair<double, double>>{{w1, w2}}, n_clusters, rng).front();
}

McEstimate mc_cluster_m2(const ModelParams& p, double a, double b, std::size_t n_clusters, const Rng& rng) {
  p.validate();
  std::vector<std::complex<double>> s(n_clusters);
  parallel_for(n_clusters, [&](std::size_t i) {
    const Cluster c = sample_signed_cluster(p, rng, i);
    s[i] = simd::phase_sum(c.times, a) * simd::phase_sum(c.times, b);
  });
  return summarize(s, rng.key());
}

std::vector<McEstimate> mc_cluster_size_moments(double m, std::size_t n_clusters, const Rng& rng) {
  const Kernel k = Kernel::exponential(1.0);
  std::vector<double> sizes(n_clusters);
  parallel_for(n_clusters, [&](std::size_t i) {
    Rng sub = rng.split(i);
    sizes[i] = static_cast<double>(sample_cluster(m, k, sub).size());
  });
  std::vector<McEstimate> out;
  for (int which = 0; which < 4; ++which) {
    std::vector<std::complex<double>> s(n_clusters);
    for (std::size_t i = 0; i < n_clusters; ++i) {
      const double M = sizes[i];
      s[i] = which == 0 ? M : which == 1 ? M * M : which == 2 ? M * M * M : M * (M - 1.0) * (M - 2.0);
    }
    out.push_back(summarize(s, rng.key()));
  }
  return out;
}

double periodogram(const EventSeries& e, double w) {
  if (!(e.window_end > 0.0)) throw InvalidArgument("window end must be positive");
  return std::norm(simd::phase_sum(e.times, w)) / e.window_end;
}

std::vector<McEstimate> mean_periodogram(const ModelParams& p, double T, const std::vector<double>& ws,
                                         std::size_t replicates, const Rng& rng, const SimulationOptions& sim) {
  const std::size_t nw = ws.size();
  std::vector<std::complex<double>> vals(nw * replicates);
  parallel_for(replicates, [&](std::size_t r) {
    const EventSeries e = simulate_window(p, T, rng.split(r), sim);
    for (std::size_t q = 0; q < nw; ++q) vals[q * replicates + r] = periodogram(e, ws[q]);
  });
  std::vector<McEstimate> out;
  for (std::size_t q = 0; q < nw; ++q) {
    std::vector<std::complex<double>> s(vals.begin() + static_cast<std::ptrdiff_t>(q * replicates),
                                        vals.begin() + static_cast<std::ptrdiff_t>((q + 1) * replicates));
    out.push_back(summarize(s, rng.key()));
  }
  return out;
}

bool ValidationReport::all_pass() const {
  for (const auto& c : comparisons)
    if (!c.pass) return false;
  return true;
}

Comparison compare(std::string name, double observed, double expected, double std_err, double k) {
  Comparison c{std::move(name), observed, expected, std_err, 0.0, k, false};
  c.z = std_err > 0.0 ? (observed - expected) / std_err : (observed == expected ? 0.0 : INFINITY);
  c.pass = std::fabs(c.z) <= k;
  return c;
}

ValidationReport validate(Suite suite, Level level, std::uint64_t seed, const ModelParams& p) {
  p.validate();
  ValidationReport rep{suite, level, seed, {}};
  const Rng rng(seed);
  const bool full = level == Level::Full;
  switch (suite) {
    case Suite::Bispectrum: {
      const std::vector<std::pair<double, double>> pairs{{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}, {-0.7, 1.3}, {2.0, -0.5}};
      const auto est = mc_b_complete(p, pairs, full ? 1'000'000 : 100'000, rng);
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto [a, b] = pairs[q];
        const cplx ref = b_complete(p, a, b);
        const std::string tag = "B_comp(" + std::to_string(a) + "," + std::to_string(b) + ")";
        rep.comparisons.push_back(compare(tag + ".re", est[q].value.real(), ref.real(), est[q].stderr_re, 3.0));
        rep.comparisons.push_back(compare(tag + ".im", est[q].value.imag(), ref.imag(), est[q].stderr_im, 3.0));
      }
      break;
    }
    case Suite::Bartlett: {
      const std::vector<double> ws{0.5, 1.0, 2.0, 4.0};
      const double T = full ? 1e4 : 2e3;
      const auto est = mean_periodogram(p, T, ws, full ? 200 : 60, rng);
      for (std::size_t q = 0; q < ws.size(); ++q)
        rep.comparisons.push_back(compare("Gamma(" + std::to_string(ws[q]) + ")", est[q].value.real(),
                                          bartlett(p, ws[q]), est[q].stderr_re, 4.0));
      break;
    }
    case Suite::Moments: {
      const double m = p.m;
      const auto est = mc_cluster_size_moments(m, full ? 1'000'000 : 100'000, rng);
      const double r0 = 1.0 / (1.0 - m);
      const double em3 = (1.0 + 2.0 * m) / std::pow(1.0 - m, 5);  // E M^3 of the Borel law
      rep.comparisons.push_back(compare("E[M]", est[0].value.real(), r0, est[0].stderr_re, 4.0));
      rep.comparisons.push_back(compare("E[M^2]", est[1].value.real(), r0 * r0 * r0, est[1].stderr_re, 4.0));
      rep.comparisons.push_back(compare("E[M^3]", est[2].value.real(), em3, est[2].stderr_re, 4.0));
      rep.comparisons.push_back(compare("E[(M)_3]", est[3].value.real(), borel_factorial3(m), est[3].stderr_re, 4.0));
      break;
    }
  }
  return rep;
}

Suite parse_suite(const std::string& s) {
  if (s == "bispectrum") return Suite::Bispectrum;
  if (s == "bartlett") return Suite::Bartlett;
  if (s == "moments") return Suite::Moments;
  throw InvalidArgument("unknown suite '" + s + "' (bispectrum, bartlett, moments)");
}

Level parse_level(const std::string& s) {
  if (s == "quick") return Level::Quick;
  if (s == "full") return Level::Full;
  throw InvalidArgument("unknown level '" + s + "' (quick, full)");
}

std::string to_string(Suite s) {
  return s == Suite::Bispectrum ? "bispectrum" : s == Suite::Bartlett ? "bartlett" : "moments";
}
std::string to_string(Level l) { return l == Level::Quick ? "quick" : "full"; }

}  // namespace orient
