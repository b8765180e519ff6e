#include "coherent/rational.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

using coherent::parse_rational;
using coherent::Rational;

TEST(ParseRational, ReducesFractions) { EXPECT_EQ(parse_rational("2/4"), Rational(1, 2)); }

TEST(ParseRational, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
}

TEST(ParseRational, NegativeFraction) {
  const auto r = parse_rational("-7/3");
  EXPECT_EQ(r, Rational(-7, 3));
  EXPECT_EQ(r.to_string(), "-7/3");
}

TEST(ParseRational, RejectsMalformed) {
  for (const char* bad : {"", "abc", "1/", "/2", "1.2.3", "1/2/3", "0x10", "1e5", "- 3"})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  EXPECT_THROW(parse_rational("3/0"), std::domain_error);
}

TEST(Rational, LowestTermsAndPositiveDenominator) {
  const Rational r(6, -8);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 4);
  EXPECT_EQ(Rational(0, 5).to_string(), "0/1");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, PowerWithNegativeExponent) {
  EXPECT_EQ(pow(Rational(2), -3), Rational(1, 8));
  EXPECT_EQ(pow(Rational(-2, 3), 3), Rational(-8, 27));
  EXPECT_EQ(pow(Rational(5), 0), Rational(1));
}

TEST(Rational, AddSubtractRoundTripOnRandomValues) {
  std::mt19937_64 rng(11);
  auto draw = [&] {
    const long num = static_cast<long>(rng() % 2000001) - 1000000;
    const long den = static_cast<long>(rng() % 999999) + 1;
    return Rational(num, den);
  };
  for (int i = 0; i < 2000; ++i) {
    const Rational a = draw(), b = draw();
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) EXPECT_EQ((a * b) / b, a);
  }
}

TEST(Rational, OrderingMatchesCrossMultiplication) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const long an = static_cast<long>(rng() % 201) - 100, ad = static_cast<long>(rng() % 50) + 1;
    const long bn = static_cast<long>(rng() % 201) - 100, bd = static_cast<long>(rng() % 50) + 1;
    const Rational a(an, ad), b(bn, bd);
    EXPECT_EQ(a < b, an * bd < bn * ad);
    EXPECT_EQ(a == b, an * bd == bn * ad);
    EXPECT_LE(min(a, b), max(a, b));
  }
}

TEST(Rational, FloatSnapshotIsDisplayOnly) {
  EXPECT_DOUBLE_EQ(Rational(1, 3).to_double(), 1.0 / 3.0);
  EXPECT_EQ(Rational(1, 3).to_short_string(), "1/3");
  EXPECT_EQ(Rational(4).to_short_string(), "4");
}
