#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>

#include "kinlim/rational.hpp"

namespace kinlim {

// Velocity component index. Velocity space is always three dimensional.
enum class Axis : int { v1 = 0, v2 = 1, v3 = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::v1, Axis::v2, Axis::v3};

constexpr int index(Axis axis) { return static_cast<int>(axis); }

// Exponent triple (a, b, c) of the monomial v1^a v2^b v3^c.
struct Exponent {
  int a = 0;
  int b = 0;
  int c = 0;

  constexpr int total() const { return a + b + c; }
  constexpr int operator[](int axis) const { return axis == 0 ? a : (axis == 1 ? b : c); }
  friend constexpr Exponent operator+(Exponent x, Exponent y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c};
  }
  friend constexpr auto operator<=>(const Exponent&, const Exponent&) = default;
};

// Polynomial in (v1, v2, v3) with exact rational coefficients. No stored term
// ever has a zero coefficient, so structural equality is value equality.
class VelocityPolynomial {
 public:
  using TermMap = std::map<Exponent, Rational>;

  VelocityPolynomial() = default;
  VelocityPolynomial(const Rational& constant);  // NOLINT: implicit by intent
  VelocityPolynomial(long constant);              // NOLINT

  static VelocityPolynomial monomial(Exponent exponent, const Rational& coefficient = 1);
  static VelocityPolynomial velocity(Axis axis);
  // |v|^2
  static VelocityPolynomial speed_squared();

  const TermMap& terms() const { return terms_; }
  Rational coefficient(Exponent exponent) const;
  bool is_zero() const { return terms_.empty(); }
  // Maximum total degree; -1 for the zero polynomial.
  int degree() const;

  double evaluate(const std::array<double, 3>& v) const;

  VelocityPolynomial& operator+=(const VelocityPolynomial& other);
  VelocityPolynomial& operator-=(const VelocityPolynomial& other);
  VelocityPolynomial& operator*=(const Rational& scale);
  VelocityPolynomial operator-() const;

  friend VelocityPolynomial operator+(VelocityPolynomial lhs, const VelocityPolynomial& rhs) {
    return lhs += rhs;
  }
  friend VelocityPolynomial operator-(VelocityPolynomial lhs, const VelocityPolynomial& rhs) {
    return lhs -= rhs;
  }
  friend VelocityPolynomial operator*(VelocityPolynomial lhs, const Rational& scale) {
    return lhs *= scale;
  }
  friend VelocityPolynomial operator*(const Rational& scale, VelocityPolynomial rhs) {
    return rhs *= scale;
  }
  friend VelocityPolynomial operator*(const VelocityPolynomial& lhs, const VelocityPolynomial& rhs);

  friend bool operator==(const VelocityPolynomial&, const VelocityPolynomial&) = default;

  // Human readable form, e.g. "1/2*v1^3 + 1/2*v1*v2^2 - 5/2*v1".
  std::string to_string() const;

 private:
  void accumulate(Exponent exponent, const Rational& coefficient);

  TermMap terms_;
};

}  // namespace kinlim
