#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "orient/asymptotics.hpp"
#include "orient/errors.hpp"

using namespace orient;

namespace {

ModelParams params(Kernel k, double m = 0.5) {
  ModelParams p;
  p.kernel = std::move(k);
  p.m = m;
  p.theta = 1.0;
  return p;
}

std::vector<double> t_list() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

}  // namespace

TEST(Asymptotics, Constants) {
  EXPECT_NEAR(C_alpha(0.5), 0.5 * std::numbers::pi / (std::tgamma(0.5) * std::cos(0.25 * std::numbers::pi)), 1e-15);
  EXPECT_NEAR(S_alpha(1.0), 0.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(chi_alpha(1.0), 4.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(chi_alpha(2.0), 2.0 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(chi_alpha(1.0 + 1e-7), 4.0 * std::log(2.0), 1e-5);
  EXPECT_NEAR(chi_alpha(1.0 - 1e-7), 4.0 * std::log(2.0), 1e-5);
  EXPECT_NEAR(chi_alpha(2.0 - 1e-7), 2.0 * std::numbers::pi, 1e-4);
  EXPECT_THROW(chi_alpha(2.5), AlphaOutOfRange);
  EXPECT_THROW(chi_alpha(0.0), AlphaOutOfRange);
}

TEST(Asymptotics, MixtureMoments) {
  const auto g = MixtureZ::gamma2(2.0);
  EXPECT_DOUBLE_EQ(g.moment(1), 1.0);
  EXPECT_DOUBLE_EQ(g.moment(2), 1.5);
  EXPECT_DOUBLE_EQ(g.moment(3), 3.0);
  const auto d = MixtureZ::deterministic(3.0);
  EXPECT_DOUBLE_EQ(d.moment(3), 27.0);
  EXPECT_THROW(d.moment(4), InvalidArgument);
}

TEST(Asymptotics, DeltaM) {
  // deterministic Z: Var Z = 0, E Z^3 - E Z E Z^2 = 0
  EXPECT_DOUBLE_EQ(delta_m(MixtureZ::deterministic(2.0), 0.3), 0.0);
  const auto g = MixtureZ::gamma2(1.0);  // 2, 6, 24
  EXPECT_NEAR(delta_m(g, 0.5), 0.5 * (24.0 - 12.0) + 0.5 * 2.0 * 2.0, 1e-14);
  EXPECT_TRUE(std::isinf(delta_m(MixtureZ::moments(1.0, 2.0, INFINITY), 0.5)));
}

TEST(Asymptotics, ZFromKernel) {
  EXPECT_EQ(z_from_kernel(Kernel::exponential(1.0)).kind, MixtureZ::Kind::Gamma2);
  EXPECT_EQ(z_from_kernel(Kernel::uniform_half(2.0)).kind, MixtureZ::Kind::Deterministic);
  const auto z = z_from_kernel(Kernel::lomax(4.0));
  EXPECT_NEAR(z.moment(1), 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(z.moment(2), 3.0 * 2.0 / 6.0, 1e-8);
  EXPECT_NEAR(z.moment(3), 4.0 * 6.0 / 6.0, 1e-7);
  EXPECT_THROW(z_from_kernel(Kernel::symmetric_laplace(1.0)), NonMonotoneKernel);
  EXPECT_TRUE(std::isinf(kernel_moment(Kernel::lomax(2.0), 2)));
}

TEST(Asymptotics, ExponentialIsGammaMixture) {
  for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(oracle::gamma2_mixture_density(x, 1.5), 1.5 * std::exp(-1.5 * x), 1e-8);
}

TEST(Asymptotics, ExponentialDeltaRoute) {
  const auto p = params(Kernel::exponential(1.0));
  const auto r = diag_limit_check(p, classify_tail(p.kernel), t_list());
  EXPECT_EQ(r.route, "delta_m");
  EXPECT_DOUBLE_EQ(r.exponent, 3.0);
  EXPECT_NEAR(r.limit, oracle::kExpDiagLimit, 1e-10);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.ratio_at_min, 1.0, 0.02);
}

TEST(Asymptotics, LomaxChiRoute) {
  const auto p = params(Kernel::lomax(1.0));
  const auto r = diag_limit_check(p, classify_tail(p.kernel), t_list());
  EXPECT_EQ(r.route, "chi_alpha");
  EXPECT_TRUE(r.monotone_approach);
  EXPECT_NEAR(r.ratio_at_min, 1.0, 0.10);
}

TEST(Asymptotics, FiniteSecondMomentDiverges) {
  const auto p = params(Kernel::lomax(2.5));
  const auto r = diag_limit_check(p, classify_tail(p.kernel), t_list());
  EXPECT_EQ(r.route, "divergent");
  EXPECT_TRUE(r.divergent);
}

TEST(Asymptotics, UniformUnderflows) {
  const auto p = params(Kernel::uniform_half(1.0));
  const auto r = diag_limit_check(p, classify_tail(p.kernel), t_list());
  EXPECT_TRUE(r.all_underflow);
  EXPECT_FALSE(r.converged);
  EXPECT_THROW(diag_limit_check(p, classify_tail(p.kernel), {1e-3, 1e-2}), InvalidArgument);
}

TEST(Asymptotics, MixtureMomentCheck) {
  for (const auto& k : {Kernel::uniform_half(1.0), Kernel::exponential(2.0), Kernel::lomax(4.0)})
    for (int p : {1, 2}) EXPECT_TRUE(mixture_moment_check(k, p, 200'000, Rng(1)).pass) << k.spec() << " p=" << p;
  EXPECT_THROW(mixture_moment_check(Kernel::lomax(2.0), 2, 1000, Rng(1)), InvalidArgument);
}
