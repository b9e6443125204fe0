#pragma once

// Exact cluster simulation of the sign-biased family N_theta on [0, T].

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orient/kernels.hpp"
#include "orient/rng.hpp"

namespace orient {

struct ModelParams {
  double nu = 1.0;
  double m = 0.5;
  double theta = 0.0;
  Kernel kernel = Kernel::exponential(1.0);

  double lambda() const { return nu / (1.0 - m); }
  // Throws InvalidArgument on nu <= 0, m outside (0, 1), |theta| > 1.
  void validate() const;
};

struct Cluster {
  std::vector<double> times;          // times[0] == 0 is the root
  std::vector<std::int64_t> parent;   // parent[0] == -1
  int sign = 1;

  std::size_t size() const { return times.size(); }
};

struct ClusterLimits {
  std::size_t size_cap = 10'000'000;
  std::size_t generation_cap = 10'000;
};

// Breadth-first Galton-Watson tree with Poisson(m) offspring and kernel
// displacements. Throws ClusterSizeCapExceeded when a cap is hit.
Cluster sample_cluster(double m, const Kernel& kernel, Rng& rng, ClusterLimits limits = {});

Cluster flip_cluster(const Cluster& c, int s);

struct Provenance {
  enum class Kind { Simulated, Ingested } kind = Kind::Simulated;
  std::uint64_t seed = 0;
  std::string description;  // parameter summary or source path
};

struct EventSeries {
  std::vector<double> times;  // sorted, inside [0, window_end]
  double window_end = 0.0;
  Provenance provenance;
  // Filled only when SimulationOptions::keep_genealogy is set: immigrant index,
  // root time and sign of the cluster each event belongs to.
  std::vector<std::uint64_t> cluster_index;
  std::vector<double> cluster_root;
  std::vector<int> cluster_sign;
};

struct SimulationOptions {
  double pad_tol = 1e-6;
  std::optional<double> padding;  // overrides the tail-quantile rule
  ClusterLimits limits{};
  bool keep_genealogy = false;
};

// Padding P = q(pad_tol) * ceil(3 / (1 - m)), q the kernel tail quantile.
double default_padding(const ModelParams& p, double pad_tol);

// Immigrants ~ Poisson(nu (T + 2P)) uniform on [-P, T + P]; immigrant j uses
// substream rng.split(j) for its position, sign and cluster. Events in [0, T]
// are kept and sorted.
EventSeries simulate_window(const ModelParams& p, double T, const Rng& rng, const SimulationOptions& opts = {});

// One timestamp per line, optional header `t`. window_end defaults to the
// largest time. Duplicates are kept. Warnings (empty input) are appended to
// `warnings` when non-null.
EventSeries ingest_events(const std::filesystem::path& path, std::optional<double> window_end = std::nullopt,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace orient
