#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "orient/errors.hpp"
#include "orient/kernels.hpp"
#include "orient/match.hpp"
#include "orient/quadrature.hpp"

using namespace orient;

namespace {

std::vector<Kernel> builtins() {
  return {Kernel::exponential(1.3), Kernel::lomax(1.5), Kernel::lomax(3.0), Kernel::uniform_half(2.0),
          Kernel::symmetric_laplace(0.7)};
}

std::vector<double> omega_grid() {
  std::vector<double> w;
  for (int i = 0; i < 64; ++i) w.push_back(-50.0 + 100.0 * i / 63.0);
  return w;
}

}  // namespace

TEST(Kernels, DensityExamples) {
  EXPECT_DOUBLE_EQ(Kernel::exponential(1.0).density(0.0), 1.0);
  EXPECT_DOUBLE_EQ(Kernel::lomax(1.0).density(1.0), 0.25);
  EXPECT_DOUBLE_EQ(Kernel::uniform_half(2.0).density(-0.5), 0.0);
  EXPECT_DOUBLE_EQ(Kernel::lomax(2.0).density(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(Kernel::exponential(2.0).density(-1e-9), 0.0);
}

TEST(Kernels, DensityIntegratesToOne) {
  for (const auto& k : builtins()) {
    double mass = quad::integrate_to_inf([&](double x) { return k.density(x); }, 0.0, 1e-11).value;
    if (k.symmetric()) mass *= 2.0;
    if (k.as<family::UniformHalf>()) mass = quad::integrate([&](double x) { return k.density(x); }, 0.0, 2.0, 1e-12).value;
    EXPECT_NEAR(mass, 1.0, 1e-8) << k.spec();
  }
}

TEST(Kernels, SymmetricDensityIsEven) {
  const auto lap = Kernel::symmetric_laplace(1.7);
  const auto tab = Kernel::tabulated({0.0, 0.5, 1.0, 1.5}, {1.0, 0.8, 0.3, 0.0}, "inline");
  for (double x : {0.1, 0.37, 1.2, 3.0}) {
    EXPECT_EQ(lap.density(x), lap.density(-x));
    EXPECT_EQ(tab.density(x), tab.density(-x));
  }
}

TEST(Kernels, TransformExamples) {
  for (const auto& k : builtins()) {
    const auto h0 = k.transform(0.0);
    EXPECT_NEAR(h0.real(), 1.0, 1e-10) << k.spec();
    EXPECT_NEAR(h0.imag(), 0.0, 1e-10) << k.spec();
  }
  const auto e = Kernel::exponential(1.0).transform(1.0);
  EXPECT_NEAR(e.real(), 0.5, 1e-15);
  EXPECT_NEAR(e.imag(), -0.5, 1e-15);
}

TEST(Kernels, LomaxTransformMatchesIncompleteGamma) {
  const auto a = Kernel::lomax(1.5).transform_checked(2.0);
  EXPECT_LE(a.error, 1e-9);
  EXPECT_NEAR(a.value.real(), oracle::kLomax15At2Re, 1e-9);
  EXPECT_NEAR(a.value.imag(), oracle::kLomax15At2Im, 1e-9);
  const auto b = Kernel::lomax(1.0).transform(1.0);
  EXPECT_NEAR(b.real(), oracle::kLomax1At1Re, 1e-9);
  EXPECT_NEAR(b.imag(), oracle::kLomax1At1Im, 1e-9);
  const auto c = Kernel::lomax(2.0).transform(0.5);
  EXPECT_NEAR(c.real(), oracle::kLomax2AtHalfRe, 1e-9);
  EXPECT_NEAR(c.imag(), oracle::kLomax2AtHalfIm, 1e-9);
}

TEST(Kernels, LomaxTransformMatchesBruteForceRiemannSum) {
  const double alpha = 1.5;
  auto h = [alpha](double t) { return alpha * std::pow(1.0 + t, -1.0 - alpha); };
  const auto ref = oracle::brute_force_transform(h, 2.0, 2e3, 20'000'000);
  const auto got = Kernel::lomax(alpha).transform(2.0);
  EXPECT_NEAR(got.real(), ref.real(), 1e-6);
  EXPECT_NEAR(got.imag(), ref.imag(), 1e-6);
}

TEST(Kernels, TransformHermitianAndBounded) {
  for (const auto& k : builtins()) {
    for (double w : omega_grid()) {
      const auto a = k.transform(w), b = k.transform(-w);
      EXPECT_LE(std::abs(a), 1.0 + 1e-12) << k.spec() << " w=" << w;
      EXPECT_NEAR(b.real(), a.real(), 1e-12);
      EXPECT_NEAR(b.imag(), -a.imag(), 1e-12);
      if (k.symmetric()) {
        EXPECT_NEAR(a.imag(), 0.0, 1e-10);
      }
    }
  }
}

TEST(Kernels, SurvivalExamples) {
  EXPECT_DOUBLE_EQ(Kernel::exponential(1.0).survival(0.0), 1.0);
  EXPECT_DOUBLE_EQ(Kernel::lomax(2.0).survival(3.0), 0.0625);
  EXPECT_DOUBLE_EQ(Kernel::uniform_half(1.0).survival(2.0), 0.0);
}

TEST(Kernels, SurvivalDensityConsistency) {
  Rng rng(99);
  for (const auto& k : builtins()) {
    for (int i = 0; i < 20; ++i) {
      double x = 4.0 * rng.uniform() - (k.symmetric() ? 2.0 : 0.0);
      double y = x + 3.0 * rng.uniform();
      const double integral = quad::integrate([&](double t) { return k.density(t); }, x, y, 1e-12).value;
      EXPECT_NEAR(k.survival(x) - k.survival(y), integral, 1e-8) << k.spec();
    }
  }
}

TEST(Kernels, SamplerIsSeedDeterministic) {
  const auto k = Kernel::exponential(2.0);
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(k.sample(a), k.sample(b));
}

TEST(Kernels, SamplerMeans) {
  const std::size_t n = 1'000'000;
  auto mean_se = [n](const Kernel& k, std::uint64_t seed) {
    Rng rng(seed);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = k.sample(rng);
      s += v;
      s2 += v * v;
    }
    const double m = s / n;
    return std::pair{m, std::sqrt((s2 / n - m * m) / n)};
  };
  const auto [mu, su] = mean_se(Kernel::uniform_half(3.0), 1);
  EXPECT_LE(std::fabs(mu - 1.5), 3.0 * su);
  const auto [ml, sl] = mean_se(Kernel::lomax(3.0), 2);
  EXPECT_LE(std::fabs(ml - 0.5), 3.0 * sl);
}

TEST(Kernels, SamplerMatchesCdf) {
  for (const auto& k : builtins()) {
    Rng rng(31);
    std::vector<double> draws(100'000);
    for (auto& d : draws) d = k.sample(rng);
    const double d = oracle::ks_one_sample(draws, [&](double x) { return 1.0 - k.survival(x); });
    EXPECT_LE(d, 0.01) << k.spec();
  }
}

TEST(Kernels, TabulatedTransformIsExactForInterpolant) {
  // Triangle density on [-1, 1]: transform 2 (1 - cos w) / w^2.
  const auto k = Kernel::tabulated({0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 0.75, 0.5, 0.25, 0.0}, "triangle");
  for (double w : {0.0, 0.3, 1.0, 7.5, 40.0}) {
    const double ref = w == 0.0 ? 1.0 : 2.0 * (1.0 - std::cos(w)) / (w * w);
    EXPECT_NEAR(k.transform(w).real(), ref, 1e-12);
  }
  Rng rng(4);
  std::vector<double> draws(100'000);
  for (auto& d : draws) d = k.sample(rng);
  EXPECT_LE(oracle::ks_one_sample(draws, [&](double x) { return 1.0 - k.survival(x); }), 0.01);
}

TEST(Kernels, TailClassification) {
  EXPECT_EQ(classify_tail(Kernel::lomax(1.0)).kind, TailKind::RegularlyVarying);
  EXPECT_DOUBLE_EQ(classify_tail(Kernel::lomax(2.0)).alpha, 2.0);
  EXPECT_DOUBLE_EQ(classify_tail(Kernel::lomax(0.5)).level, 1.0);
  EXPECT_EQ(classify_tail(Kernel::lomax(2.5)).kind, TailKind::FiniteSecondMoment);
  EXPECT_EQ(classify_tail(Kernel::lomax(4.0)).kind, TailKind::FiniteThirdMoment);
  EXPECT_EQ(classify_tail(Kernel::exponential(1.0)).kind, TailKind::FiniteThirdMoment);
}

TEST(Kernels, SpecGrammarRoundTrip) {
  for (const char* s : {"exp:1.5", "lomax:2", "uhalf:3", "slap:0.5", "match:exp:1:0.5", "match:lomax:2:0.25"}) {
    const Kernel k = parse_kernel_spec(s);
    EXPECT_EQ(parse_kernel_spec(k.spec()).spec(), k.spec()) << s;
  }
  EXPECT_EQ(parse_kernel_spec("uniform:1").family_name(), "UniformHalf");
  EXPECT_THROW(parse_kernel_spec("gauss:1"), InvalidArgument);
  EXPECT_THROW(parse_kernel_spec("exp:abc"), InvalidArgument);
  EXPECT_THROW(parse_kernel_spec("exp:-1"), InvalidArgument);
  try {
    parse_kernel_spec("gauss:1");
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("lomax"), std::string::npos);
  }
}

TEST(Kernels, TabulatedCsv) {
  const auto path = std::filesystem::temp_directory_path() / "orient_tab_kernel.csv";
  {
    std::ofstream out(path);
    out << "x,density\n0,2\n0.25,1.5\n0.5,1\n0.75,0.5\n1,0\n";
  }
  const Kernel k = parse_kernel_spec("tab:" + path.string());
  EXPECT_TRUE(k.symmetric());
  EXPECT_NEAR(k.transform(0.0).real(), 1.0, 1e-14);
  EXPECT_NEAR(k.density(0.0), 1.0, 1e-14);  // renormalized to unit mass
  {
    std::ofstream out(path);
    out << "x,density\n0,1\n0.5,oops\n";
  }
  EXPECT_THROW(load_tabulated_csv(path), ParseError);
  std::filesystem::remove(path);
}
