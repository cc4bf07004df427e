#include "kinlim/moment_algebra.hpp"

#include <stdexcept>

namespace kinlim {
namespace {

// (e-1)!! for even e >= 0.
mpz_class odd_double_factorial_below(int e) {
  mpz_class result = 1;
  for (int k = e - 1; k > 1; k -= 2) result *= k;
  return result;
}

}  // namespace

Rational gaussian_moment(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) {
    throw std::invalid_argument("gaussian_moment: negative exponent");
  }
  if (a % 2 != 0 || b % 2 != 0 || c % 2 != 0) return Rational(0);
  return Rational(odd_double_factorial_below(a) * odd_double_factorial_below(b) *
                  odd_double_factorial_below(c));
}

Rational gaussian_moment(Exponent exponent) {
  return gaussian_moment(exponent.a, exponent.b, exponent.c);
}

Rational inner_product(const VelocityPolynomial& p, const VelocityPolynomial& q) {
  Rational sum = 0;
  for (const auto& [ep, cp] : p.terms()) {
    for (const auto& [eq, cq] : q.terms()) {
      const Exponent e = ep + eq;
      if (e.a % 2 != 0 || e.b % 2 != 0 || e.c % 2 != 0) continue;
      sum += cp * cq * gaussian_moment(e);
    }
  }
  return sum;
}

Rational expectation(const VelocityPolynomial& p) {
  Rational sum = 0;
  for (const auto& [e, c] : p.terms()) sum += c * gaussian_moment(e);
  return sum;
}

std::array<VelocityPolynomial, 5> collision_invariants() {
  return {VelocityPolynomial(1), VelocityPolynomial::velocity(Axis::v1),
          VelocityPolynomial::velocity(Axis::v2), VelocityPolynomial::velocity(Axis::v3),
          VelocityPolynomial::speed_squared()};
}

VelocityPolynomial project_collision_invariants(const VelocityPolynomial& p) {
  // Orthogonal basis of the invariant span: 1, v1, v2, v3, |v|^2 - 3 with
  // squared norms 1, 1, 1, 1, 6.
  static const std::array<VelocityPolynomial, 5> basis = [] {
    auto k = collision_invariants();
    k[4] -= VelocityPolynomial(3);
    return k;
  }();
  static const std::array<Rational, 5> norms = {1, 1, 1, 1, 6};

  VelocityPolynomial projection;
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const Rational coeff = inner_product(p, basis[m]) / norms[m];
    projection += basis[m] * coeff;
  }
  return projection;
}

VelocityPolynomial make_A(Axis i) {
  return (VelocityPolynomial::speed_squared() - VelocityPolynomial(5)) *
         VelocityPolynomial::velocity(i) * make_rational(1, 2);
}

VelocityPolynomial make_B(Axis i, Axis j) {
  VelocityPolynomial b = VelocityPolynomial::velocity(i) * VelocityPolynomial::velocity(j);
  if (i == j) b -= VelocityPolynomial::speed_squared() * make_rational(1, 3);
  return b;
}

Rational radial_moment(int n) {
  if (n < 0) throw std::invalid_argument("radial_moment: negative order");
  return Rational(odd_double_factorial_below(2 * n)) / 2;
}

}  // namespace kinlim
