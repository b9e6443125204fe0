#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "orient/parallel.hpp"
#include "orient/rng.hpp"
#include "orient/simd.hpp"

using namespace orient;

namespace {

std::vector<double> data(std::size_t n, std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

}  // namespace

TEST(Simd, ScalarAlwaysAvailable) {
  EXPECT_TRUE(simd::available(simd::Backend::Scalar));
  EXPECT_EQ(simd::name(simd::Backend::Scalar), "scalar");
}

TEST(Simd, ScalarReferenceValues) {
  const auto& s = simd::table(simd::Backend::Scalar);
  const double a[] = {1.0, -2.0, 3.0}, b[] = {4.0, 5.0, -6.0};
  EXPECT_DOUBLE_EQ(s.dot(a, b, 3), -24.0);
  EXPECT_DOUBLE_EQ(s.abs_sum(a, 3), 6.0);
  const double x[] = {0.0, 1.0};
  const auto z = s.phase_sum(x, 2, std::acos(-1.0));
  EXPECT_NEAR(z.real(), 0.0, 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
}

TEST(Simd, VectorVariantsMatchScalar) {
  if (!simd::available(simd::Backend::Avx2)) GTEST_SKIP() << "AVX2 not available on this CPU";
  const auto& s = simd::table(simd::Backend::Scalar);
  const auto& v = simd::table(simd::Backend::Avx2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u, 100000u}) {
    const auto a = data(n, n + 1, 10.0), b = data(n, n + 2, 3.0);
    const double scale = std::max<double>(1.0, static_cast<double>(n));
    EXPECT_NEAR(v.dot(a.data(), b.data(), n), s.dot(a.data(), b.data(), n), 1e-12 * scale * 30.0) << n;
    EXPECT_NEAR(v.abs_sum(a.data(), n), s.abs_sum(a.data(), n), 1e-13 * scale * 10.0) << n;
    for (double w : {0.0, 0.37, 5.0, 123.4}) {
      const auto zs = s.phase_sum(a.data(), n, w), zv = v.phase_sum(a.data(), n, w);
      EXPECT_NEAR(zv.real(), zs.real(), 1e-12 * scale) << n << " " << w;
      EXPECT_NEAR(zv.imag(), zs.imag(), 1e-12 * scale) << n << " " << w;
    }
  }
}

TEST(Simd, SetActiveSwitchesBackend) {
  const auto before = simd::active().backend;
  simd::set_active(simd::Backend::Scalar);
  EXPECT_EQ(simd::active().backend, simd::Backend::Scalar);
  simd::set_active(before);
  EXPECT_EQ(simd::active().backend, before);
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u, 0u}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  set_thread_count(0);
  EXPECT_GE(thread_count(), 1u);
}

TEST(Parallel, RethrowsWorkerException) {
  set_thread_count(4);
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  set_thread_count(0);
}

TEST(Rng, SplitIsStableAndDistinct) {
  const Rng r(1);
  Rng a = r.split(5), b = r.split(5), c = r.split(6);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  Rng u(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}
