#pragma once

// Monte-Carlo oracles: cluster transforms W(w) = sum_x exp(-i w x), Bartlett
// periodograms and cluster-size moments.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "orient/simulate.hpp"

namespace orient {

struct McEstimate {
  std::complex<double> value;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Mean and componentwise standard error of i.i.d. complex samples, summed in index order.
McEstimate summarize(const std::vector<std::complex<double>>& samples, std::uint64_t seed);

// W(w) of a cluster sampled from substream rng.split(i), sign drawn with P(+1) = (1 + theta) / 2.
Cluster sample_signed_cluster(const ModelParams& p, const Rng& rng, std::uint64_t i);

// nu * mean of W(w1) W(w2) W(-w1 - w2) over independent clusters.
McEstimate mc_b_complete(const ModelParams& p, double w1, double w2, std::size_t n_clusters, const Rng& rng);
// Same clusters reused for every pair.
std::vector<McEstimate> mc_b_complete(const ModelParams& p, const std::vector<std::pair<double, double>>& pairs,
                                      std::size_t n_clusters, const Rng& rng);

// Mean of W(a) W(b); for theta = 1 the target is R(a) R(b) R(a + b).
McEstimate mc_cluster_m2(const ModelParams& p, double a, double b, std::size_t n_clusters, const Rng& rng);

// Raw moments of the cluster size M: E M, E M^2, E M^3, E M(M-1)(M-2).
std::vector<McEstimate> mc_cluster_size_moments(double m, std::size_t n_clusters, const Rng& rng);

double periodogram(const EventSeries& e, double w);

// Replicate r simulates with rng.split(r); one estimate per frequency.
std::vector<McEstimate> mean_periodogram(const ModelParams& p, double T, const std::vector<double>& ws,
                                         std::size_t replicates, const Rng& rng, const SimulationOptions& sim = {});

enum class Suite { Bispectrum, Bartlett, Moments };
enum class Level { Quick, Full };

struct Comparison {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  double k = 0.0;  // band in standard errors
  bool pass = false;
};

struct ValidationReport {
  Suite suite;
  Level level;
  std::uint64_t seed = 0;
  std::vector<Comparison> comparisons;
  bool all_pass() const;
};

Comparison compare(std::string name, double observed, double expected, double std_err, double k);

// Defaults: Exponential(1), nu = 1, m = 0.5 unless `p` overrides.
ValidationReport validate(Suite suite, Level level, std::uint64_t seed, const ModelParams& p);

Suite parse_suite(const std::string& s);
Level parse_level(const std::string& s);
std::string to_string(Suite s);
std::string to_string(Level l);

}  // namespace orient
