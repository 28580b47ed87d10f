#include <gtest/gtest.h>

#include "vertiport/rational.hpp"

namespace vertiport {
namespace {

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("1/3") * 3, Rational(1));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "1/0", "a", "1.5", "1/", "/2", "1//2", " 1", "1/-2"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, CanonicalText) {
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(-8, 4)), "-2");
  EXPECT_EQ(to_string(Rational(0)), "0");
  EXPECT_EQ(parse_rational(to_string(Rational(-22, 7))), Rational(-22, 7));
}

TEST(Rational, DecimalRendering) {
  EXPECT_EQ(to_decimal(Rational(1, 3)), "0.333333");
  EXPECT_EQ(to_decimal(Rational(2, 3)), "0.666667");
  EXPECT_EQ(to_decimal(Rational(-5, 2)), "-2.500000");
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 4)), 0.25);
}

}  // namespace
}  // namespace vertiport
