#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kinlim/kinetic_model.hpp"
#include "kinlim/moment_algebra.hpp"

using namespace kinlim;
using Poly = VelocityPolynomial;

namespace {

Poly random_polynomial(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> total(0, max_degree);
  std::uniform_int_distribution<long> num(-7, 7);
  std::uniform_int_distribution<long> den(1, 5);
  Poly p;
  for (int t = 0; t < 5; ++t) {
    const int d = total(rng);
    const int a = std::uniform_int_distribution<int>(0, d)(rng);
    const int b = std::uniform_int_distribution<int>(0, d - a)(rng);
    p += Poly::monomial({a, b, d - a - b}, make_rational(num(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST(BgkOperator, RejectsNonPositiveFrequency) {
  EXPECT_THROW(BgkOperator(Rational(0)), std::invalid_argument);
  EXPECT_THROW(BgkOperator(make_rational(-1, 2)), std::invalid_argument);
}

TEST(BgkOperator, AnnihilatesCollisionInvariants) {
  const BgkOperator op(make_rational(3, 2));
  for (const auto& k : collision_invariants()) EXPECT_EQ(op.apply(k), Poly());
}

TEST(BgkOperator, ActsAsScaledIdentityOnKernelComplement) {
  const BgkOperator op(make_rational(2));
  const Poly b12 = make_B(Axis::v1, Axis::v2);
  EXPECT_EQ(op.apply(b12), b12 * make_rational(2));
  EXPECT_EQ(apply_L(op, make_A(Axis::v3)), make_A(Axis::v3) * make_rational(2));
}

TEST(BgkOperator, SelfAdjointAndNonNegativeOnRandomPairs) {
  const BgkOperator op;
  std::mt19937_64 rng(7);
  for (int n = 0; n < 120; ++n) {
    const Poly p = random_polynomial(rng, 6);
    const Poly q = random_polynomial(rng, 6);
    EXPECT_EQ(inner_product(op.apply(p), q), inner_product(p, op.apply(q)));
    EXPECT_GE(inner_product(op.apply(p), p), 0);
    for (const auto& k : collision_invariants()) EXPECT_EQ(inner_product(op.apply(p), k), 0);
  }
}

TEST(Gamma, IsHalfLOfProduct) {
  const BgkOperator op;
  const Poly g = Poly(make_rational(1, 3)) + Poly::velocity(Axis::v2) * make_rational(2) +
                 Poly::speed_squared() * make_rational(-1, 4);
  EXPECT_EQ(gamma(op, g, g), op.apply(g * g) * make_rational(1, 2));
  // Symmetric in its arguments.
  const Poly h = Poly::velocity(Axis::v1);
  EXPECT_EQ(op.gamma(g, h), op.gamma(h, g));
  // Orthogonal to the collision invariants.
  for (const auto& k : collision_invariants()) EXPECT_EQ(inner_product(op.gamma(g, h), k), 0);
}

TEST(HatSolutions, InvertLOnHeatFluxAndStress) {
  const BgkOperator op(make_rational(5, 3));
  const HatSolution hats = solve_hats(op);
  EXPECT_EQ(hats.alpha, make_rational(3, 5));
  EXPECT_EQ(hats.beta, make_rational(3, 5));
  for (Axis i : kAxes) {
    EXPECT_EQ(op.apply(hats.a_hat[index(i)]), make_A(i));
    EXPECT_EQ(project_collision_invariants(hats.a_hat[index(i)]), Poly());
    for (Axis j : kAxes) EXPECT_EQ(op.apply(hats.b_hat[index(i)][index(j)]), make_B(i, j));
  }
}

TEST(TransportCoefficients, UnitCollisionFrequency) {
  const auto tc = transport_coefficients(solve_hats(BgkOperator()));
  EXPECT_EQ(tc.kappa, 1);
  EXPECT_EQ(tc.nu, 1);
}

TEST(TransportCoefficients, ScaleInverselyWithFrequency) {
  const auto two = transport_coefficients(solve_hats(BgkOperator(Rational(2))));
  EXPECT_EQ(two.kappa, make_rational(1, 2));
  EXPECT_EQ(two.nu, make_rational(1, 2));
  const auto third = transport_coefficients(solve_hats(BgkOperator(make_rational(1, 3))));
  EXPECT_EQ(third.kappa, 3);
  EXPECT_EQ(third.nu, 3);
}

TEST(TransportCoefficients, CorruptedStressPreimageIsDetected) {
  HatSolution hats = solve_hats(BgkOperator());
  hats.b_hat[2][1] += Poly::monomial({0, 1, 1}, make_rational(1, 9));
  EXPECT_THROW(transport_coefficients(hats), TensorMismatch);
  HatSolution heat = solve_hats(BgkOperator());
  heat.a_hat[1] += Poly::velocity(Axis::v1) * make_rational(1, 2) * Poly::speed_squared();
  EXPECT_THROW(transport_coefficients(heat), TensorMismatch);
}

TEST(IsotropicStressForm, Entries) {
  EXPECT_EQ(isotropic_stress_form(0, 0, 0, 0), make_rational(4, 3));
  EXPECT_EQ(isotropic_stress_form(0, 0, 1, 1), make_rational(-2, 3));
  EXPECT_EQ(isotropic_stress_form(0, 1, 0, 1), 1);
  EXPECT_EQ(isotropic_stress_form(0, 1, 1, 0), 1);
  EXPECT_EQ(isotropic_stress_form(0, 1, 2, 2), 0);
}

TEST(ClassifyRegime, DocumentedExamples) {
  EXPECT_EQ(classify_regime(0.5, 0.5).kind, RegimeClass::nsf);
  EXPECT_EQ(classify_regime(2.0, 0.5).kind, RegimeClass::stokes);
  EXPECT_EQ(classify_regime(0.5, 2.0).kind, RegimeClass::euler);
  EXPECT_EQ(classify_regime(1.0, 1.0).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(1.5, 1.5).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(0.0, 0.5).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(-1.0, 0.5).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(std::numeric_limits<double>::quiet_NaN(), 0.5).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(std::numeric_limits<double>::infinity(), 0.5).kind, RegimeClass::out_of_scope);
}

TEST(ClassifyRegime, BoundariesAndExclusivity) {
  // q just below min(1, r).
  EXPECT_EQ(classify_regime(0.9, 0.8).kind, RegimeClass::stokes);
  EXPECT_EQ(classify_regime(0.8, 0.9).kind, RegimeClass::euler);
  // q >= 1 with r > q is out of scope, and so is r >= 1 with q > r.
  EXPECT_EQ(classify_regime(3.0, 1.0).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(classify_regime(1.0, 3.0).kind, RegimeClass::out_of_scope);
  EXPECT_EQ(to_string(RegimeClass::nsf), "nsf");
  EXPECT_EQ(to_string(RegimeClass::out_of_scope), "out_of_scope");
  // Every grid point falls in exactly one class, matching the defining inequalities.
  for (int a = 1; a <= 30; ++a) {
    for (int b = 1; b <= 30; ++b) {
      const double r = 0.1 * a;
      const double q = 0.1 * b;
      const bool nsf = r == q && r < 1.0;
      const bool stokes = q < std::min(1.0, r);
      const bool euler = r < std::min(1.0, q);
      ASSERT_LE(int(nsf) + int(stokes) + int(euler), 1);
      const auto kind = classify_regime(r, q).kind;
      if (nsf) EXPECT_EQ(kind, RegimeClass::nsf);
      else if (stokes) EXPECT_EQ(kind, RegimeClass::stokes);
      else if (euler) EXPECT_EQ(kind, RegimeClass::euler);
      else EXPECT_EQ(kind, RegimeClass::out_of_scope);
    }
  }
}

TEST(SourceProfile, MomentsAgainstExactOracle) {
  const std::array<Rational, 3> f{make_rational(2, 3), make_rational(-1, 5), 0};
  const Rational h = make_rational(7, 4);
  const Poly s = source_velocity_profile(f, h);
  EXPECT_EQ(inner_product(s, Poly(1L)), 0);
  EXPECT_EQ(inner_product(s, Poly::velocity(Axis::v1)), f[0]);
  EXPECT_EQ(inner_product(s, Poly::velocity(Axis::v2)), f[1]);
  EXPECT_EQ(inner_product(s, Poly::velocity(Axis::v3)), 0);
  const Poly half_energy = (Poly::speed_squared() - Poly(5L)) * make_rational(1, 2);
  EXPECT_EQ(inner_product(s, half_energy), make_rational(5, 2) * h);
  // It lies in Ker L, so it carries no heat flux or stress.
  EXPECT_EQ(project_collision_invariants(s), s);
  const HatSolution hats = solve_hats(BgkOperator());
  for (Axis i : kAxes) EXPECT_EQ(inner_product(s, hats.a_hat[index(i)]), 0);
}

TEST(SourceProfile, ExponentEqualsKnudsenExponent) {
  EXPECT_DOUBLE_EQ(source_exponent(classify_regime(0.5, 0.5)), 0.5);
  EXPECT_DOUBLE_EQ(source_exponent(classify_regime(2.0, 0.5)), 0.5);
  EXPECT_DOUBLE_EQ(source_exponent(classify_regime(0.5, 2.0)), 2.0);
}

TEST(SourceSpec, SingleModeIsSolenoidalWithZeroMeans) {
  const SpatialGrid grid(16);
  const Fft2d fft(grid);
  const SourceSpec s = SourceSpec::single_mode(grid, 0.05);
  EXPECT_LT(s.constraint_defect(fft), 1e-15);
  EXPECT_NO_THROW(s.validate(fft));
  EXPECT_DOUBLE_EQ(s.f1[3], 0.05 * std::sin(grid.coordinate(3)));
  EXPECT_DOUBLE_EQ(s.h[3 * 16], 0.05 * std::sin(grid.coordinate(3)));
  EXPECT_THROW(SourceSpec::single_mode(grid, 0.05, 8), std::invalid_argument);
  EXPECT_THROW(SourceSpec::single_mode(grid, 0.05, 0), std::invalid_argument);
}

TEST(SourceSpec, RejectsCompressibleOrBiasedForcing) {
  const SpatialGrid grid(16);
  const Fft2d fft(grid);
  SourceSpec compressible = SourceSpec::zero(grid);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) compressible.f1[i * 16 + j] = std::sin(grid.coordinate(i));
  }
  EXPECT_THROW(compressible.validate(fft), std::invalid_argument);
  SourceSpec biased = SourceSpec::zero(grid);
  for (auto& v : biased.h) v = 0.1;
  EXPECT_THROW(biased.validate(fft), std::invalid_argument);
}

TEST(MomentChain, HalvedMomentsMatchLimitTerms) {
  const BgkOperator op;
  const std::array<Rational, 3> u{make_rational(1, 2), make_rational(-2, 3), make_rational(3, 4)};
  const Rational rho = make_rational(2, 7);
  const Rational theta = make_rational(-5, 3);
  const MomentChainReplay replay = replay_moment_chain(op, rho, u, theta);
  EXPECT_TRUE(replay.matches());
  const Rational u_sq = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(replay.heat_flux[i], make_rational(5, 2) * u[i] * theta);
    EXPECT_EQ(replay.gamma_heat_flux[i], replay.heat_flux[i]);
    EXPECT_EQ(replay.full_square_heat_flux[i], 2 * replay.heat_flux[i]);
    for (int j = 0; j < 3; ++j) {
      const Rational expected = u[i] * u[j] - (i == j ? u_sq / 3 : Rational(0));
      EXPECT_EQ(replay.stress[i][j], expected);
      EXPECT_EQ(replay.gamma_stress[i][j], expected);
      EXPECT_EQ(replay.full_square_stress[i][j], 2 * expected);
    }
  }
}

TEST(MomentChain, HydrodynamicPolynomialRecoversMoments) {
  const std::array<Rational, 3> u{1, make_rational(1, 2), 0};
  const Poly g = hydrodynamic_polynomial(make_rational(3), u, make_rational(4));
  EXPECT_EQ(inner_product(g, Poly(1L)), 3);
  EXPECT_EQ(inner_product(g, Poly::velocity(Axis::v2)), make_rational(1, 2));
  EXPECT_EQ(inner_product(g, (Poly::speed_squared() - Poly(3L)) * make_rational(1, 3)), 4);
}
