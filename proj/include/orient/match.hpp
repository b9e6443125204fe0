#pragma once

// Reversible spectral match for monotone one-sided kernels. The symmetric
// building block rho_h = (h(|x|) - m (h * h_check)(x)) / (2 - m) is an even
// density; Y = Y_1 + ... + Y_K with K ~ p_n and Y_k ~ rho_h has an even density
// phi_h whose branching model reproduces |1 - m hat h|^2 exactly.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "orient/kernels.hpp"
#include "orient/rng.hpp"

namespace orient {

struct MatchSpec {
  Kernel base;
  double m;
  double pn_truncation_eps = 1e-12;
  std::optional<double> rho_grid;  // tabulation spacing for exported tables
};

// Throws NonMonotoneKernel unless `base` is one-sided and nonincreasing on a
// 10^3-point grid (1e-12 slack); throws InvalidArgument unless 0 < m < 1.
void validate_match_spec(const MatchSpec& spec);

// p_1 = (2 - m) / 2, p_{n+1} = p_n (2n - 1) m (2 - m) / (2 (n + 1)); truncated
// once the cumulative mass reaches 1 - eps, last entry absorbing the residual.
std::vector<double> pn_weights(double m, double eps);

class MatchModel {
 public:
  explicit MatchModel(MatchSpec spec);

  const MatchSpec& spec() const { return spec_; }
  const Kernel& base() const { return spec_.base; }
  double m() const { return spec_.m; }
  std::span<const double> pn() const { return pn_; }

  double rho_density(double x) const;
  double rho_transform(double w) const;
  double radicand(double w) const;
  std::complex<double> phi_transform(double w) const;

  // Density and upper tail of phi_h by Fourier inversion of the real transform.
  double density(double x) const;
  double survival(double x) const;

  std::size_t sample_count(Rng& rng) const;
  double sample_rho(Rng& rng) const;
  double sample(Rng& rng) const;
  double tail_quantile(double tol) const;

 private:
  MatchSpec spec_;
  std::vector<double> pn_;
  std::vector<double> pn_cdf_;
};

double rho_density(const MatchSpec& spec, double x);
std::complex<double> phi_transform(const MatchSpec& spec, double w);
double sample_match(const MatchModel& model, Rng& rng);
Kernel build_matched_kernel(const MatchSpec& spec);

}  // namespace orient
