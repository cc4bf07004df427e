#pragma once

#include <array>

#include "kinlim/rational.hpp"
#include "kinlim/velocity_polynomial.hpp"

// Exact algebra of velocity polynomials against the global Maxwellian
// M(v) = (2 pi)^{-3/2} exp(-|v|^2 / 2). Nothing in here rounds.
namespace kinlim {

// Integral of v1^a v2^b v3^c M(v) dv: zero if any exponent is odd, otherwise
// the product of (e-1)!! over the three exponents.
Rational gaussian_moment(int a, int b, int c);
Rational gaussian_moment(Exponent exponent);

// <p, q>_M = integral of p q M dv.
Rational inner_product(const VelocityPolynomial& p, const VelocityPolynomial& q);

// <p, 1>_M
Rational expectation(const VelocityPolynomial& p);

// {1, v1, v2, v3, |v|^2}: the collision invariants.
std::array<VelocityPolynomial, 5> collision_invariants();

// Orthogonal projection onto span of the collision invariants.
VelocityPolynomial project_collision_invariants(const VelocityPolynomial& p);

// A_i = (|v|^2 - 5) v_i / 2
VelocityPolynomial make_A(Axis i);
// B_ij = v_i v_j - |v|^2 delta_ij / 3
VelocityPolynomial make_B(Axis i, Axis j);

// (1/sqrt(2 pi)) * integral_0^inf r^(2n) exp(-r^2/2) dr = (2n-1)!! / 2.
// Used to evaluate radial integral formulas exactly.
Rational radial_moment(int n);

}  // namespace kinlim
