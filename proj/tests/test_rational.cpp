#include <gtest/gtest.h>

#include "netcontagion/rational.hpp"

using netcontagion::Rational;

TEST(Rational, NormalizesSignAndGcd) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(Rational(0, 5), Rational(0));
}

TEST(Rational, ArithmeticAndOrdering) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) - Rational(3, 4), Rational(-1, 4));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_LT(Rational(1, 3), Rational(34, 100));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_THROW(Rational(1) / Rational(0), netcontagion::InvariantError);
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("0.75"), Rational(3, 4));
  EXPECT_EQ(Rational::parse(" -0.5 "), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("1"), Rational(1));
  EXPECT_EQ(Rational::parse(".25"), Rational(1, 4));
  EXPECT_THROW(Rational::parse("a/b"), netcontagion::ParseError);
  EXPECT_THROW(Rational::parse("1/0"), netcontagion::InvariantError);
  EXPECT_THROW(Rational::parse(""), netcontagion::ParseError);
}

TEST(Rational, DecimalRenderingRoundsHalfEven) {
  EXPECT_EQ(Rational(1, 2).to_decimal(0), "0");
  EXPECT_EQ(Rational(3, 2).to_decimal(0), "2");
  EXPECT_EQ(Rational(2, 3).to_decimal(6), "0.666667");
  EXPECT_EQ(Rational(1, 8).to_decimal(2), "0.12");
  EXPECT_EQ(Rational(3, 8).to_decimal(2), "0.38");
  EXPECT_EQ(Rational(-1, 3).to_decimal(3), "-0.333");
  EXPECT_EQ(Rational(4, 11).to_decimal(4), "0.3636");
  EXPECT_EQ(Rational(1).to_decimal(6), "1.000000");
}

TEST(Rational, OverflowIsDetected) {
  Rational big(INT64_MAX / 2 + 1);
  EXPECT_THROW(big * Rational(4), netcontagion::InvariantError);
  // Comparison never overflows.
  EXPECT_LT(Rational(INT64_MAX - 1, INT64_MAX), Rational(1));
}
