#pragma once

// Reduced third factorial-cumulant density c3 on a lag lattice, recovered by
// inverse 2D DFT of B_fac, with its odd part and the odd-contrast functionals.

#include <cstddef>
#include <string>
#include <vector>

#include "orient/simulate.hpp"
#include "orient/test_function.hpp"

namespace orient {

struct CumulantGrid {
  double half_width = 0.0;  // Lambda
  std::size_t n = 0;        // points per axis
  double spacing = 0.0;     // 2 Lambda / n
  std::vector<double> values;  // row-major, node (i, j) at tau = (tau(i), tau(j))
  double imag_residue = 0.0;   // max |Im| / max |Re| of the raw inversion
  double alias_fraction = 0.0; // |c3| mass share in the outer 10% band
  bool alias_warning = false;
  double theta = 1.0;
  std::vector<std::string> warnings;

  double tau(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(n / 2)) * spacing; }
  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  // Lattice index of -tau(i) under the periodic identification.
  std::size_t reflect(std::size_t i) const { return (n - i) % n; }
  double cell() const { return spacing * spacing; }
  double integral() const;
};

// Lattice tau_j = (j - n/2) * 2 Lambda / n, frequencies w_k = k pi / Lambda.
// n must be a power of two >= 64. The Nyquist row and column average +/- Nyquist.
CumulantGrid invert_bispectrum(const ModelParams& p, double Lambda, std::size_t n);

CumulantGrid odd_part(const CumulantGrid& g);
CumulantGrid even_part(const CumulantGrid& g);

// Riemann sum of |c3 odd| over [-H, H]^2; throws HOutOfRange for H > Lambda.
double contrast_mass_DH(const CumulantGrid& g, double H);

// Riemann sum of g * c3 odd; throws SupportExceedsGrid if supp g exceeds the grid.
double mu_g_time(const CumulantGrid& g, const OddTestFunction& f);

// sgn(c3 odd) on [-H, H]^2, read off the nearest lattice node of `odd`.
OddTestFunction sign_test_function(const CumulantGrid& odd, double H);

// Forward lattice transform sum_j c_j exp(-i w.tau_j) * cell at (w1, w2).
std::complex<double> lattice_transform(const CumulantGrid& g, double w1, double w2);

struct FreqQuadOptions {
  double omega_max = 60.0;
  double spacing = 0.07853981633974483;  // pi / 40
};

struct MuFreqResult {
  double value = 0.0;
  double truncation_bound = 0.0;
  std::vector<std::string> warnings;
};

// (2 pi)^-2 int H_g Im B_fac over [-Omega, Omega]^2 by the trapezoid rule.
MuFreqResult mu_g_freq(const ModelParams& p, const OddTestFunction& f, const FreqQuadOptions& opts = {});

}  // namespace orient
