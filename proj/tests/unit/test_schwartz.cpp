#include <gtest/gtest.h>

#include "padic_dbn/errors.hpp"
#include "padic_dbn/schwartz.hpp"

using namespace padic_dbn;

TEST(Schwartz, EvaluateBallIndicators) {
  const TestFunction unit = TestFunction::constant(2, Rational(1));
  EXPECT_EQ(evaluate(unit, std::vector<unsigned>{1, 0, 1}), Rational(1));
  const TestFunction ball = TestFunction::ball_indicator(2, 1, 1);
  EXPECT_EQ(evaluate(ball, std::vector<unsigned>{1}), Rational(1));
  EXPECT_EQ(evaluate(ball, std::vector<unsigned>{0}), Rational(0));
  EXPECT_THROW(evaluate(TestFunction::ball_indicator(2, 1, 2), std::vector<unsigned>{1}), DomainError);
}

TEST(Schwartz, HaarIntegral) {
  EXPECT_EQ(haar_integral(TestFunction::constant(3, Rational(1))), Rational(1));
  EXPECT_EQ(haar_integral(TestFunction::ball_indicator(3, 5, 2)), Rational(1, 9));
  // The unit sphere of Z_2 is the odd ball 1 + 2Z_2.
  EXPECT_EQ(haar_integral(TestFunction::ball_indicator(2, 1, 1)), Rational(1, 2));
}

TEST(Schwartz, RefinementPreservesValuesAndIntegral) {
  const TestFunction f(3, 1, std::vector<Rational>{Rational(1), Rational(-2), Rational(5, 3)});
  const TestFunction r = f.refined();
  EXPECT_EQ(r.level(), 2u);
  for (std::uint64_t x = 0; x < 9; ++x) EXPECT_EQ(r.at(x), f.at(x));
  EXPECT_EQ(haar_integral(r), haar_integral(f));
}

TEST(Schwartz, ConvKernelConstantAndBall) {
  const TreeGroup g(2, 2);
  for (const Rational& x : discretize_conv_kernel(TestFunction::constant(2, Rational(3)), g)) {
    EXPECT_EQ(x, Rational(3, 16));
  }
  // w = indicator of 2Z_2 puts 1/16 on the even differences.
  const auto k = discretize_conv_kernel(TestFunction::ball_indicator(2, 0, 1), g);
  EXPECT_EQ(k, (std::vector<Rational>{Rational(1, 16), Rational(0), Rational(1, 16), Rational(0)}));
  EXPECT_THROW(discretize_conv_kernel(TestFunction::ball_indicator(2, 0, 3), g), DomainError);
}

TEST(Schwartz, Kernel2) {
  const TreeGroup g(2, 1);
  const TestFunction2 one(2, 0, std::vector<Rational>{Rational(1)});
  for (const Rational& x : discretize_kernel2(one, g)) EXPECT_EQ(x, Rational(1, 4));
  const TestFunction u(2, 1, std::vector<Rational>{Rational(1), Rational(2)});
  const TestFunction v(2, 1, std::vector<Rational>{Rational(3), Rational(-1)});
  const auto m = discretize_kernel2(TestFunction2::separable(u, v), g);
  const auto bu = discretize_bias(u, g);
  const auto bv = discretize_bias(v, g);
  for (std::uint64_t i = 0; i < 2; ++i)
    for (std::uint64_t j = 0; j < 2; ++j) EXPECT_EQ(m[i * 2 + j], bu[i] * bv[j]);
  const TestFunction2 zero(2, 1, std::vector<Rational>(4, Rational(0)));
  for (const Rational& x : discretize_kernel2(zero, g)) EXPECT_EQ(x, Rational(0));
}

TEST(Schwartz, RadialCoefficients) {
  const TreeGroup g1(2, 1);
  const RadialProfile one{2, {}, Rational(1)};
  EXPECT_EQ(radial_ball_integral(one, 1), Rational(1, 2));
  EXPECT_EQ(radial_coefficients(one, g1).diag, Rational(1, 4));
  // Only the shell |z| = 1/4 carries weight: 1/4 - 1/8 = 1/8.
  const RadialProfile shell{2, {Rational(0), Rational(0), Rational(1)}, Rational(0)};
  EXPECT_EQ(radial_ball_integral(shell, 1), Rational(1, 8));
  EXPECT_EQ(radial_coefficients(shell, g1).diag, Rational(1, 16));
  const RadialProfile inner{2, {Rational(7), Rational(0)}, Rational(0)};
  EXPECT_EQ(radial_coefficients(inner, g1).diag, Rational(0));
  EXPECT_EQ(radial_coefficients(inner, g1).offdiag, (std::vector<Rational>{Rational(7, 4)}));
}
