#pragma once

// Small-frequency constants and numeric checks of the diagonal limits of Im B.

#include <string>
#include <vector>

#include "orient/kernels.hpp"
#include "orient/simulate.hpp"

namespace orient {

// C(alpha) = (pi/2) / (Gamma(alpha) cos(pi alpha / 2)), S(alpha) = (pi/2) / (Gamma(alpha) sin(pi alpha / 2)).
double C_alpha(double alpha);
double S_alpha(double alpha);
// 2 (2 - 2^alpha) C(alpha) on (0, 2) \ {1}, 4 log 2 at 1, 2 pi at 2. Throws AlphaOutOfRange.
double chi_alpha(double alpha);

// Scale Z of a monotone density written as X = Y Z, Y ~ U(0, 1).
struct MixtureZ {
  enum class Kind { Deterministic, Gamma2, MomentList } kind = Kind::MomentList;
  double a = 0.0;     // Deterministic
  double beta = 0.0;  // Gamma2: Z ~ Gamma(2, beta)
  double ez = 0.0, ez2 = 0.0, ez3 = 0.0;  // MomentList, +inf allowed for ez2 / ez3

  static MixtureZ deterministic(double a);
  static MixtureZ gamma2(double beta);
  static MixtureZ moments(double ez, double ez2, double ez3);
  // E Z^p for p in {1, 2, 3}.
  double moment(int p) const;
};

// (1 - m)(E Z^3 - E Z E Z^2) + m E Z Var Z; +inf when E Z^3 is infinite.
double delta_m(const MixtureZ& z, double m);

// Deterministic(a) for UniformHalf(a), Gamma2(beta) for Exponential(beta), and
// moment list E Z^p = (p + 1) E X^p otherwise. Throws NonMonotoneKernel.
MixtureZ z_from_kernel(const Kernel& k);

// E X^p by quadrature (+inf when the moment diverges).
double kernel_moment(const Kernel& k, int p);

struct DiagEntry {
  double t = 0.0;
  double im_b = 0.0;
  double scaled = 0.0;  // |Im B(t, t)| / t^exponent
  double ratio = 0.0;   // scaled / limit
  bool underflow = false;
};

struct DiagReport {
  std::string route;     // "chi_alpha", "delta_m", "divergent", "none"
  double exponent = 0.0;
  double limit = 0.0;
  std::vector<DiagEntry> entries;
  double ratio_at_min = 0.0;
  bool monotone_approach = false;
  bool converged = false;  // monotone approach and |ratio - 1| <= 5% at the smallest t
  bool divergent = false;  // scaled values increase as t decreases
  bool all_underflow = false;
};

DiagReport diag_limit_check(const ModelParams& p, const KernelTailClass& tail, const std::vector<double>& t_list);

struct MomentCheck {
  double mc_mean = 0.0;
  double std_err = 0.0;
  double expected = 0.0;  // E Z^p / (p + 1)
  double z = 0.0;
  bool pass = false;
};

MomentCheck mixture_moment_check(const Kernel& k, int p, std::size_t n_samples, const Rng& rng);

}  // namespace orient
