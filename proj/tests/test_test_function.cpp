#include <gtest/gtest.h>

#include <cmath>

#include "orient/errors.hpp"
#include "orient/test_function.hpp"

using namespace orient;

TEST(TestFunction, BumpIsOddBoundedAndSupported) {
  const auto g = default_bump(2.0);
  EXPECT_EQ(g.support_radius(), 2.0);
  for (double a : {-1.5, -0.3, 0.4, 1.1})
    for (double b : {-1.7, -0.2, 0.8, 1.9}) {
      EXPECT_EQ(g(a, b), -g(-a, -b));
      EXPECT_LE(std::fabs(g(a, b)), g.bound());
    }
  EXPECT_EQ(g(2.5, 1.0), 0.0);
  EXPECT_GT(g(1.0, 1.0), 0.0);
}

TEST(TestFunction, SeparableFactorMatchesNumericTransform) {
  const auto g = default_bump(2.0);
  ASSERT_TRUE(g.has_factor());
  const auto num = numeric_transform_factor(g, 400);
  for (auto [a, b] : {std::pair{0.3, 0.9}, {-1.2, 2.0}, {2.5, 0.1}})
    EXPECT_NEAR(g.transform_factor(a, b), num(a, b), 2e-4 * std::max(1.0, std::fabs(num(a, b)))) << a << "," << b;
  EXPECT_NEAR(g.transform_factor(0.0, 0.0), 0.0, 1e-15);
}

TEST(TestFunction, ScalingCarriesTransform) {
  const auto g = default_bump(1.5);
  const auto h = g.scaled(-3.0);
  EXPECT_DOUBLE_EQ(h(0.5, 0.7), -3.0 * g(0.5, 0.7));
  EXPECT_NEAR(h.transform_factor(1.0, 2.0), -3.0 * g.transform_factor(1.0, 2.0), 1e-15);
  EXPECT_DOUBLE_EQ(h.bound(), 3.0 * g.bound());
}

TEST(TestFunction, QuadrantIndicator) {
  const auto q = quadrant_indicator(1.0);
  EXPECT_EQ(q(0.5, 0.5), 1.0);
  EXPECT_EQ(q(-0.5, -0.5), -1.0);
  EXPECT_EQ(q(0.5, -0.5), 0.0);
  EXPECT_EQ(q(0.0, 0.5), 0.0);
  EXPECT_FALSE(q.has_transform());
  EXPECT_THROW(q.transform_factor(1.0, 1.0), InvalidArgument);
}

TEST(TestFunction, RejectsBadRadius) { EXPECT_THROW(default_bump(0.0), InvalidArgument); }
