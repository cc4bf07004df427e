#include <gtest/gtest.h>

#include <stdexcept>

#include "kinlim/rational.hpp"
#include "kinlim/velocity_polynomial.hpp"

using namespace kinlim;
using Poly = VelocityPolynomial;

TEST(Rational, MakeRationalReducesToLowestTerms) {
  const Rational r = make_rational(6, -4);
  EXPECT_EQ(r.get_num(), -3);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(to_string(make_rational(8, 4)), "2");
}

TEST(Rational, ZeroDenominatorThrows) { EXPECT_THROW(make_rational(1, 0), std::invalid_argument); }

TEST(Rational, ParseAcceptsIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("2"), make_rational(2));
  EXPECT_EQ(parse_rational("3/6"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("0.25"), make_rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5"), make_rational(-3, 2));
  EXPECT_EQ(parse_rational("-0.5"), make_rational(-1, 2));
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.x"), std::invalid_argument);
}

TEST(Rational, ToDoubleIsNearest) { EXPECT_DOUBLE_EQ(to_double(make_rational(1, 3)), 1.0 / 3.0); }

TEST(VelocityPolynomial, ZeroTermsAreNeverStored) {
  const Poly v1 = Poly::velocity(Axis::v1);
  const Poly p = v1 - v1;
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), -1);
  EXPECT_EQ(p, Poly());
  EXPECT_EQ(Poly(0L), Poly());
}

TEST(VelocityPolynomial, SpeedSquaredExpandsPerAxis) {
  const Poly s = Poly::speed_squared();
  EXPECT_EQ(s.terms().size(), 3u);
  EXPECT_EQ(s.coefficient({2, 0, 0}), 1);
  EXPECT_EQ(s.coefficient({0, 2, 0}), 1);
  EXPECT_EQ(s.coefficient({0, 0, 2}), 1);
  EXPECT_EQ(s.degree(), 2);
}

TEST(VelocityPolynomial, ProductMatchesHandExpansion) {
  const Poly v1 = Poly::velocity(Axis::v1);
  const Poly v2 = Poly::velocity(Axis::v2);
  const Poly a = v1 + Poly(make_rational(1, 2));
  const Poly b = v1 - v2;
  const Poly expected = Poly::monomial({2, 0, 0}) - Poly::monomial({1, 1, 0}) + v1 * make_rational(1, 2) -
                        v2 * make_rational(1, 2);
  EXPECT_EQ(a * b, expected);
  EXPECT_EQ(a * b, b * a);
  EXPECT_EQ((a * b).degree(), 2);
}

TEST(VelocityPolynomial, EvaluateMatchesTerms) {
  const Poly p = Poly::monomial({1, 2, 0}, make_rational(3)) - Poly::monomial({0, 0, 3}, make_rational(1, 4)) +
                 Poly(make_rational(2));
  const std::array<double, 3> v{0.5, -2.0, 1.5};
  EXPECT_DOUBLE_EQ(p.evaluate(v), 3.0 * 0.5 * 4.0 - 0.25 * 1.5 * 1.5 * 1.5 + 2.0);
}

TEST(VelocityPolynomial, ScalingAndNegation) {
  const Poly v3 = Poly::velocity(Axis::v3);
  EXPECT_EQ(-v3 + v3, Poly());
  EXPECT_EQ(v3 * make_rational(0), Poly());
  EXPECT_EQ((v3 * make_rational(2, 3)).coefficient({0, 0, 1}), make_rational(2, 3));
}

TEST(VelocityPolynomial, ToStringIsReadable) {
  const Poly p = Poly::velocity(Axis::v1) * make_rational(1, 2) - Poly(make_rational(5, 2));
  const std::string text = p.to_string();
  EXPECT_NE(text.find("v1"), std::string::npos);
  EXPECT_NE(text.find("5/2"), std::string::npos);
  EXPECT_EQ(Poly().to_string(), "0");
}
