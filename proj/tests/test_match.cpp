#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "orient/errors.hpp"
#include "orient/match.hpp"
#include "orient/quadrature.hpp"

using namespace orient;

namespace {

MatchSpec spec(Kernel k, double m) { return MatchSpec{std::move(k), m, 1e-12, std::nullopt}; }

}  // namespace

TEST(Match, PnWeightsMatchClosedForm) {
  for (double m : {0.2, 0.5, 0.9}) {
    const auto p = pn_weights(m, 1e-12);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-14);
    for (int n = 1; n <= std::min<int>(30, static_cast<int>(p.size()) - 1); ++n)
      EXPECT_NEAR(p[n - 1], oracle::pn_direct(m, n), 1e-13) << "m=" << m << " n=" << n;
  }
  EXPECT_NEAR(pn_weights(0.5, 1e-12)[0], 0.75, 1e-15);
  EXPECT_THROW(pn_weights(1.0, 1e-12), InvalidArgument);
}

TEST(Match, Validation) {
  EXPECT_NO_THROW(validate_match_spec(spec(Kernel::exponential(1.0), 0.5)));
  EXPECT_THROW(validate_match_spec(spec(Kernel::symmetric_laplace(1.0), 0.5)), NonMonotoneKernel);
  EXPECT_THROW(validate_match_spec(spec(Kernel::exponential(1.0), 1.2)), InvalidArgument);
}

TEST(Match, RhoIsEvenDensity) {
  for (const auto& k : {Kernel::exponential(1.0), Kernel::lomax(2.0), Kernel::uniform_half(1.0)}) {
    const MatchModel mm(spec(k, 0.5));
    for (double x : {0.0, 0.2, 0.9, 3.0}) {
      EXPECT_GE(mm.rho_density(x), 0.0);
      EXPECT_EQ(mm.rho_density(x), mm.rho_density(-x));
    }
    const double half = quad::integrate_to_inf([&](double x) { return mm.rho_density(x); }, 0.0, 1e-10).value;
    EXPECT_NEAR(2.0 * half, 1.0, 1e-7) << k.spec();
  }
}

TEST(Match, RhoExponentialClosedForm) {
  // h * h_check is Laplace(1)/2 for exp(1)
  const MatchModel mm(spec(Kernel::exponential(1.0), 0.4));
  for (double x : {0.0, 0.5, 2.0}) EXPECT_NEAR(mm.rho_density(x), (std::exp(-x) - 0.4 * 0.5 * std::exp(-x)) / 1.6, 1e-14);
}

TEST(Match, SpectralIdentity) {
  for (const auto& k : {Kernel::exponential(1.0), Kernel::lomax(2.0), Kernel::uniform_half(2.0)}) {
    for (double m : {0.2, 0.5, 0.8}) {
      const MatchModel mm(spec(k, m));
      for (double w : {0.0, 0.1, 1.0, 5.0, 30.0}) {
        const double lhs = std::norm(1.0 - m * mm.phi_transform(w));
        const double rhs = std::norm(1.0 - m * k.transform(w));
        EXPECT_NEAR(lhs, rhs, 1e-9) << k.spec() << " m=" << m << " w=" << w;
        EXPECT_NEAR(mm.phi_transform(w).imag(), 0.0, 0.0);
      }
    }
  }
}

TEST(Match, TransformEqualsRandomSumSeries) {
  const MatchModel mm(spec(Kernel::exponential(1.0), 0.5));
  for (double w : {0.0, 0.3, 2.0, 10.0})
    EXPECT_NEAR(mm.phi_transform(w).real(), oracle::random_sum_series(0.5, mm.rho_transform(w), 1e-15), 1e-12);
}

TEST(Match, CountMean) {
  const double m = 0.5;
  const MatchModel mm(spec(Kernel::exponential(1.0), m));
  const auto p = mm.pn();
  double expect = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) expect += (i + 1.0) * p[i];
  Rng rng(8);
  const int n = 200'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(mm.sample_count(rng));
    s += k;
    s2 += k * k;
  }
  const double mean = s / n;
  EXPECT_LE(std::fabs(mean - expect), 4.0 * std::sqrt((s2 / n - mean * mean) / n));
}

TEST(Match, SamplerCharacteristicFunction) {
  for (const auto& k : {Kernel::exponential(1.0), Kernel::lomax(2.0)}) {
    const MatchModel mm(spec(k, 0.5));
    Rng rng(21);
    const int n = 200'000;
    std::vector<double> ys(n);
    for (auto& y : ys) y = sample_match(mm, rng);
    for (double w : {0.25, 1.0, 3.0}) {
      double s = 0.0, s2 = 0.0, si = 0.0;
      for (double y : ys) {
        const double c = std::cos(w * y);
        s += c;
        s2 += c * c;
        si += std::sin(w * y);
      }
      const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
      EXPECT_LE(std::fabs(mean - mm.phi_transform(w).real()), 4.0 * se) << k.spec() << " w=" << w;
      EXPECT_LE(std::fabs(si / n), 4.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST(Match, InvertedDensityAndSurvival) {
  const MatchModel mm(spec(Kernel::exponential(1.0), 0.5));
  EXPECT_NEAR(mm.survival(0.0), 0.5, 1e-8);
  double prev = 0.5;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double s = mm.survival(x);
    EXPECT_LT(s, prev);
    prev = s;
    const double h = 1e-3;
    EXPECT_NEAR(mm.density(x), (mm.survival(x - h) - mm.survival(x + h)) / (2.0 * h), 1e-6);
    EXPECT_NEAR(mm.density(x), mm.density(-x), 1e-12);
  }
}

TEST(Match, MatchedKernelRoundTrip) {
  const Kernel k = build_matched_kernel(spec(Kernel::lomax(2.0), 0.25));
  EXPECT_TRUE(k.symmetric());
  EXPECT_EQ(k.family_name(), "SymmetricMatch");
  const Kernel q = parse_kernel_spec(k.spec());
  for (double w : {0.0, 0.7, 4.0}) EXPECT_NEAR(k.transform(w).real(), q.transform(w).real(), 1e-15);
  EXPECT_NEAR(k.transform(0.0).real(), 1.0, 1e-12);
}
