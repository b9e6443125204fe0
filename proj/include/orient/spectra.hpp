#pragma once

// Closed-form Bartlett spectrum and bispectra of the branching model.
// Phi(w) = m hat h(w), R(w) = 1 / (1 - Phi(w)), lambda = nu / (1 - m).
// Third-order quantities are returned for N_theta: Re B + i theta Im B.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "orient/simulate.hpp"

namespace orient {

using cplx = std::complex<double>;

enum class BForm { R, Q };

double bartlett(const ModelParams& p, double w);
cplx b_complete(const ModelParams& p, double w1, double w2, BForm form = BForm::R);
cplx b_factorial(const ModelParams& p, double w1, double w2);
double im_b_diagonal(const ModelParams& p, double t);

// E[(M)_3] of the Borel total progeny.
double borel_factorial3(double m);
double envelope(const ModelParams& p);

struct ScaleCheck {
  bool pass = false;
  cplx scaled;
  cplx reference;
  double rel_diff = 0.0;
};
// B_fac under the kernel time-scaled by beta at (w1, w2) against the original
// kernel at (w1 / beta, w2 / beta). Throws UnsupportedKernelScaling.
ScaleCheck scale_check(const ModelParams& p, double beta, double w1, double w2, double rel_tol = 1e-10);
Kernel scaled_kernel(const Kernel& k, double beta);

// Evaluators on precomputed transforms h1 = hat h(w1), h2 = hat h(w2),
// h12 = hat h(w1 + w2). `theta` multiplies the imaginary part.
namespace eval {
double bartlett(double lambda, double m, cplx h);
cplx b_complete(double lambda, double m, double theta, cplx h1, cplx h2, cplx h12, BForm form);
cplx b_factorial(double lambda, double m, double theta, cplx h1, cplx h2, cplx h12);
// A(t) on the diagonal from ht = hat h(t) and h2t = hat h(2t).
double diagonal_a(double m, cplx ht, cplx h2t);
double im_b_diagonal(double lambda, double m, double theta, cplx ht, cplx h2t);
}  // namespace eval

struct SpectralGrid {
  int dims = 1;
  std::vector<double> w1;
  std::vector<double> w2;  // empty when dims == 1
  std::vector<cplx> values;
  std::optional<std::vector<cplx>> std_err;  // componentwise, Monte-Carlo only

  std::size_t size() const { return values.size(); }
};

enum class BKind { Complete, Factorial };

SpectralGrid bartlett_grid(const ModelParams& p, std::span<const double> ws);
// Full tensor grid: node (i, j) at index i * w2s.size() + j. Kernel transforms
// are evaluated once per distinct frequency within the call.
SpectralGrid bispectrum_grid(const ModelParams& p, std::span<const double> w1s, std::span<const double> w2s,
                             BKind kind, BForm form = BForm::R);

}  // namespace orient
