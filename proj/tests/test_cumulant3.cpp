#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "orient/cumulant3.hpp"
#include "orient/errors.hpp"
#include "orient/montecarlo.hpp"
#include "orient/spectra.hpp"

using namespace orient;

namespace {

ModelParams forward() {
  ModelParams p;
  p.theta = 1.0;
  return p;
}

const CumulantGrid& base_grid() {
  static const CumulantGrid g = invert_bispectrum(forward(), 40.0, 512);
  return g;
}

}  // namespace

TEST(Cumulant3, TotalMassAndResidue) {
  const auto& g = base_grid();
  EXPECT_NEAR(g.integral(), oracle::kBFac00, 1e-9);
  EXPECT_LE(g.imag_residue, 1e-10);
  EXPECT_FALSE(g.alias_warning);
  EXPECT_TRUE(g.warnings.empty());
  EXPECT_EQ(g.n, 512u);
  EXPECT_DOUBLE_EQ(g.spacing, 80.0 / 512.0);
  EXPECT_DOUBLE_EQ(g.tau(256), 0.0);
  EXPECT_EQ(g.reflect(0), 0u);
  EXPECT_EQ(g.reflect(256), 256u);
  EXPECT_EQ(g.reflect(300), 212u);
}

TEST(Cumulant3, RejectsBadLattice) {
  EXPECT_THROW(invert_bispectrum(ModelParams{}, 40.0, 100), InvalidArgument);
  EXPECT_THROW(invert_bispectrum(ModelParams{}, 40.0, 32), InvalidArgument);
  EXPECT_THROW(invert_bispectrum(ModelParams{}, -1.0, 64), InvalidArgument);
}

TEST(Cumulant3, AliasWarningOnSmallWindow) {
  ModelParams p = forward();
  p.m = 0.9;
  const auto g = invert_bispectrum(p, 4.0, 64);
  EXPECT_TRUE(g.alias_warning);
  EXPECT_FALSE(g.warnings.empty());
}

TEST(Cumulant3, LatticeTransformReproducesBispectrum) {
  const auto& g = base_grid();
  const ModelParams p = forward();
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, -0.25}, {1.0, 2.0}}) {
    const cplx ref = b_factorial(p, a, b);
    const cplx got = lattice_transform(g, a, b);
    EXPECT_NEAR(got.real(), ref.real(), 1e-3 * std::abs(ref) + 1e-6);
    EXPECT_NEAR(got.imag(), ref.imag(), 1e-3 * std::abs(ref) + 1e-6);
  }
}

TEST(Cumulant3, OddEvenSplit) {
  const auto& g = base_grid();
  const auto o = odd_part(g), e = even_part(g);
  double odd_integral = 0.0;
  for (std::size_t i = 0; i < g.n; i += 7)
    for (std::size_t j = 0; j < g.n; j += 5) {
      EXPECT_NEAR(o.at(i, j) + e.at(i, j), g.at(i, j), 1e-15);
      EXPECT_EQ(o.at(i, j), -o.at(g.reflect(i), g.reflect(j)));
      EXPECT_EQ(e.at(i, j), e.at(g.reflect(i), g.reflect(j)));
    }
  for (double v : o.values) odd_integral += v;
  EXPECT_NEAR(odd_integral * o.cell(), 0.0, 1e-12);
  EXPECT_NEAR(e.integral(), g.integral(), 1e-9);
}

TEST(Cumulant3, ThetaScalesOddPartOnly) {
  ModelParams p;
  p.theta = -0.5;
  const auto h = invert_bispectrum(p, 40.0, 512);
  const auto o1 = odd_part(base_grid()), oh = odd_part(h);
  const auto e1 = even_part(base_grid()), eh = even_part(h);
  for (std::size_t k = 0; k < h.values.size(); k += 997) {
    EXPECT_NEAR(oh.values[k], -0.5 * o1.values[k], 1e-12);
    EXPECT_NEAR(eh.values[k], e1.values[k], 1e-12);
  }
}

TEST(Cumulant3, ContrastMassMonotone) {
  const auto o = odd_part(base_grid());
  double prev = 0.0;
  for (double H : {0.5, 1.0, 2.0, 5.0, 10.0, 40.0}) {
    const double d = contrast_mass_DH(o, H);
    EXPECT_GE(d, prev);
    prev = d;
  }
  EXPECT_GT(prev, 0.0);
  EXPECT_THROW(contrast_mass_DH(o, 41.0), HOutOfRange);
}

TEST(Cumulant3, SignFunctionAttainsMass) {
  const auto o = odd_part(base_grid());
  for (double H : {1.0, 3.0}) {
    const auto s = sign_test_function(o, H);
    EXPECT_EQ(mu_g_time(o, s), contrast_mass_DH(o, H));
    EXPECT_LE(std::fabs(mu_g_time(o, default_bump(H))), contrast_mass_DH(o, H));
  }
  EXPECT_THROW(mu_g_time(o, default_bump(50.0)), SupportExceedsGrid);
}

TEST(Cumulant3, TimeAndFrequencyRoutesAgree) {
  const auto o = odd_part(base_grid());
  const auto g = default_bump(5.0);
  const double t = mu_g_time(o, g);
  const auto f = mu_g_freq(forward(), g);
  EXPECT_NEAR(f.value / t, 1.0, 1e-3);
  EXPECT_TRUE(f.warnings.empty());
  EXPECT_THROW(mu_g_freq(forward(), quadrant_indicator(1.0)), InvalidArgument);
}

TEST(Cumulant3, QuadrantMassesMatchClusterHistogram) {
  // reduced c3 = nu * E sum over distinct ordered triples of one cluster
  const ModelParams p = forward();
  const Rng rng(77);
  const std::size_t n = 200'000;
  std::array<double, 4> s{}, s2{};
  for (std::size_t c = 0; c < n; ++c) {
    const Cluster cl = sample_signed_cluster(p, rng, c);
    std::array<double, 4> q{};
    const auto& x = cl.times;
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t k = 0; k < x.size(); ++k) {
          if (j == a || k == a || j == k) continue;
          const int idx = (x[j] > x[a] ? 0 : 1) + (x[k] > x[a] ? 0 : 2);
          q[idx] += 1.0;
        }
    for (int i = 0; i < 4; ++i) {
      s[i] += q[i];
      s2[i] += q[i] * q[i];
    }
  }
  const auto& g = base_grid();
  std::array<double, 4> grid{};
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) {
      const double t1 = g.tau(i), t2 = g.tau(j), v = g.at(i, j) * g.cell();
      const double w1p = t1 > 0.0 ? 1.0 : (t1 == 0.0 ? 0.5 : 0.0);
      const double w2p = t2 > 0.0 ? 1.0 : (t2 == 0.0 ? 0.5 : 0.0);
      grid[0] += v * w1p * w2p;
      grid[1] += v * (1.0 - w1p) * w2p;
      grid[2] += v * w1p * (1.0 - w2p);
      grid[3] += v * (1.0 - w1p) * (1.0 - w2p);
    }
  for (int i = 0; i < 4; ++i) {
    const double mean = p.nu * s[i] / n;
    const double se = p.nu * std::sqrt((s2[i] / n - (s[i] / n) * (s[i] / n)) / n);
    EXPECT_LE(std::fabs(grid[i] - mean), 4.0 * se + 0.01 * oracle::kBFac00) << "quadrant " << i;
  }
}
