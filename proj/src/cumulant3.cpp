#include "orient/cumulant3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <fftw3.h>

#include "orient/errors.hpp"
#include "orient/parallel.hpp"
#include "orient/simd.hpp"
#include "orient/spectra.hpp"

namespace orient {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// hat h(k * dw) for k in [-K, K], index k + K.
std::vector<cplx> transform_table(const Kernel& k, double dw, std::ptrdiff_t K) {
  std::vector<cplx> t(static_cast<std::size_t>(2 * K + 1));
  parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t i) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    const cplx v = k.transform(static_cast<double>(j) * dw);
    t[static_cast<std::size_t>(K + j)] = v;
    t[static_cast<std::size_t>(K - j)] = std::conj(v);
  });
  return t;
}

// Row range [lo, hi] of lattice nodes with |tau| <= H.
std::pair<std::size_t, std::size_t> box_range(const CumulantGrid& g, double H) {
  std::size_t lo = g.n, hi = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::fabs(g.tau(i)) <= H) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  return {lo, hi};
}

}  // namespace

double CumulantGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell();
}

CumulantGrid invert_bispectrum(const ModelParams& p, double Lambda, std::size_t n) {
  p.validate();
  if (!(Lambda > 0.0) || !std::isfinite(Lambda)) throw InvalidArgument("half width Lambda must be positive");
  if (n < 64 || !power_of_two(n)) throw InvalidArgument("grid size n must be a power of two >= 64");
  const auto N = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t half = N / 2;
  const double dw = std::numbers::pi / Lambda;
  const auto table = transform_table(p.kernel, dw, N);
  auto hat = [&](std::ptrdiff_t k) { return table[static_cast<std::size_t>(k + N)]; };
  const double lam = p.lambda();
  auto bfac = [&](std::ptrdiff_t k1, std::ptrdiff_t k2) {
    return eval::b_factorial(lam, p.m, p.theta, hat(k1), hat(k2), hat(k1 + k2));
  };

  fftw_complex* buf = fftw_alloc_complex(n * n);
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  parallel_for(n, [&](std::size_t r) {
    const std::ptrdiff_t k1 = static_cast<std::ptrdiff_t>(r) - half;
    for (std::ptrdiff_t k2 = -half; k2 < half; ++k2) {
      cplx b;
      const bool ny1 = k1 == -half, ny2 = k2 == -half;
      if (ny1 && ny2) {
        b = 0.25 * (bfac(-half, -half) + bfac(half, -half) + bfac(-half, half) + bfac(half, half));
      } else if (ny1) {
        b = 0.5 * (bfac(-half, k2) + bfac(half, k2));
      } else if (ny2) {
        b = 0.5 * (bfac(k1, -half) + bfac(k1, half));
      } else {
        b = bfac(k1, k2);
      }
      // (-1)^(k1 + k2) moves the lattice origin to the grid centre.
      if (((k1 + k2) & 1) != 0) b = -b;
      const std::size_t i1 = static_cast<std::size_t>((k1 + N) % N), i2 = static_cast<std::size_t>((k2 + N) % N);
      buf[i1 * n + i2][0] = b.real();
      buf[i1 * n + i2][1] = b.imag();
    }
  });
  fftw_execute(plan);

  CumulantGrid g;
  g.half_width = Lambda;
  g.n = n;
  g.spacing = 2.0 * Lambda / static_cast<double>(n);
  g.theta = p.theta;
  g.values.resize(n * n);
  const double norm = 1.0 / (4.0 * Lambda * Lambda);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double re = buf[k][0] * norm, im = buf[k][1] * norm;
    g.values[k] = re;
    max_re = std::max(max_re, std::fabs(re));
    max_im = std::max(max_im, std::fabs(im));
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  g.imag_residue = max_re > 0.0 ? max_im / max_re : 0.0;
  if (g.imag_residue > 1e-6)
    g.warnings.push_back("ImaginaryResidue: inversion residue " + std::to_string(g.imag_residue) + " of max");

  double total = 0.0, band = 0.0;
  const double edge = 0.9 * Lambda;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::fabs(g.at(i, j));
      total += a;
      if (std::fabs(g.tau(i)) >= edge || std::fabs(g.tau(j)) >= edge) band += a;
    }
  g.alias_fraction = total > 0.0 ? band / total : 0.0;
  if (g.alias_fraction > 0.01) {
    g.alias_warning = true;
    g.warnings.push_back("AliasWarning: boundary band carries " + std::to_string(100.0 * g.alias_fraction) +
                         "% of |c3| mass; increase Lambda");
  }
  return g;
}

CumulantGrid odd_part(const CumulantGrid& g) {
  CumulantGrid out = g;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      out.values[i * g.n + j] = 0.5 * (g.at(i, j) - g.at(g.reflect(i), g.reflect(j)));
  return out;
}

CumulantGrid even_part(const CumulantGrid& g) {
  CumulantGrid out = g;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      out.values[i * g.n + j] = 0.5 * (g.at(i, j) + g.at(g.reflect(i), g.reflect(j)));
  return out;
}

double contrast_mass_DH(const CumulantGrid& g, double H) {
  if (!(H >= 0.0) || H > g.half_width) throw HOutOfRange("H must lie in [0, Lambda]");
  const CumulantGrid odd = odd_part(g);
  const auto [lo, hi] = box_range(odd, H);
  if (lo > hi) return 0.0;
  double s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i)
    s += simd::abs_sum(std::span<const double>(odd.values.data() + i * odd.n + lo, hi - lo + 1));
  return s * odd.cell();
}

double mu_g_time(const CumulantGrid& g, const OddTestFunction& f) {
  const double H = f.support_radius();
  if (H > g.half_width) throw SupportExceedsGrid("test function support exceeds the lag grid half width");
  const CumulantGrid odd = odd_part(g);
  const auto [lo, hi] = box_range(odd, H);
  if (lo > hi) return 0.0;
  std::vector<double> row(hi - lo + 1);
  double s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    for (std::size_t j = lo; j <= hi; ++j) row[j - lo] = f(odd.tau(i), odd.tau(j));
    s += simd::dot(row, std::span<const double>(odd.values.data() + i * odd.n + lo, row.size()));
  }
  return s * odd.cell();
}

OddTestFunction sign_test_function(const CumulantGrid& odd, double H) {
  if (H > odd.half_width) throw HOutOfRange("H must lie in [0, Lambda]");
  auto snapshot = std::make_shared<const CumulantGrid>(odd);
  auto eval = [snapshot](double t1, double t2) {
    const auto& g = *snapshot;
    const double c = static_cast<double>(g.n / 2);
    const long i = std::lround(t1 / g.spacing + c), j = std::lround(t2 / g.spacing + c);
    if (i < 0 || j < 0 || i >= static_cast<long>(g.n) || j >= static_cast<long>(g.n)) return 0.0;
    const double v = g.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  };
  return OddTestFunction(H, 1.0, eval, "sign");
}

cplx lattice_transform(const CumulantGrid& g, double w1, double w2) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) {
      const double arg = w1 * g.tau(i) + w2 * g.tau(j);
      re += g.at(i, j) * std::cos(arg);
      im -= g.at(i, j) * std::sin(arg);
    }
  return {re * g.cell(), im * g.cell()};
}

MuFreqResult mu_g_freq(const ModelParams& p, const OddTestFunction& f, const FreqQuadOptions& opts) {
  p.validate();
  if (!(opts.omega_max > 0.0 && opts.spacing > 0.0)) throw InvalidArgument("frequency window must be positive");
  if (!f.has_transform()) throw InvalidArgument("test function carries no transform factor");
  const auto K = static_cast<std::ptrdiff_t>(std::ceil(opts.omega_max / opts.spacing));
  const double dw = opts.spacing;
  const auto table = transform_table(p.kernel, dw, 2 * K);
  auto hat = [&](std::ptrdiff_t k) { return table[static_cast<std::size_t>(k + 2 * K)]; };

  std::vector<cplx> fac;
  if (f.has_factor()) {
    fac.resize(static_cast<std::size_t>(2 * K + 1));
    for (std::ptrdiff_t k = -K; k <= K; ++k) fac[static_cast<std::size_t>(k + K)] = f.factor(k * dw);
  }
  auto hg = [&](std::ptrdiff_t k1, std::ptrdiff_t k2) {
    if (!fac.empty())
      return 2.0 * f.factor_scale() *
             std::imag(fac[static_cast<std::size_t>(k1 + K)] * fac[static_cast<std::size_t>(k2 + K)]);
    return f.transform_factor(k1 * dw, k2 * dw);
  };

  const double lam = p.lambda();
  const std::size_t side = static_cast<std::size_t>(2 * K + 1);
  std::vector<double> rows(side, 0.0), frame(side, 0.0);
  std::vector<double> hg_outer(side, 0.0), hg_mid(side, 0.0), hg_all(side, 0.0);
  parallel_for(side, [&](std::size_t r) {
    const std::ptrdiff_t k1 = static_cast<std::ptrdiff_t>(r) - K;
    double s = 0.0, fr = 0.0, ho = 0.0, hm = 0.0, ha = 0.0;
    for (std::ptrdiff_t k2 = -K; k2 <= K; ++k2) {
      const double h = hg(k1, k2);
      const double im = eval::b_factorial(lam, p.m, p.theta, hat(k1), hat(k2), hat(k1 + k2)).imag();
      const double w = ((k1 == -K || k1 == K) ? 0.5 : 1.0) * ((k2 == -K || k2 == K) ? 0.5 : 1.0);
      s += w * h * im;
      const std::ptrdiff_t ring = std::max(std::abs(k1), std::abs(k2));
      if (ring >= (9 * K) / 10) fr += std::fabs(h * im);
      if (ring == K) ho = std::max(ho, std::fabs(h));
      if (ring == K / 2) hm = std::max(hm, std::fabs(h));
      ha = std::max(ha, std::fabs(h));
    }
    rows[r] = s;
    frame[r] = fr;
    hg_outer[r] = ho;
    hg_mid[r] = hm;
    hg_all[r] = ha;
  });
  MuFreqResult out;
  double total = 0.0, band = 0.0, outer = 0.0, mid = 0.0, peak = 0.0;
  for (std::size_t r = 0; r < side; ++r) {
    total += rows[r];
    band += frame[r];
    outer = std::max(outer, hg_outer[r]);
    mid = std::max(mid, hg_mid[r]);
    peak = std::max(peak, hg_all[r]);
  }
  const double norm = dw * dw / (4.0 * std::numbers::pi * std::numbers::pi);
  out.value = total * norm;
  out.truncation_bound = band * norm;
  // |H_g| falling by less than the factor 4 from Omega/2 to Omega means decay slower than |w|^-2.
  if (peak > 0.0 && outer > 1e-12 * peak && outer > 0.25 * mid)
    out.warnings.push_back("TransformNotIntegrable: H_g decays slower than |w|^-2 on the frequency window");
  return out;
}

}  // namespace orient
