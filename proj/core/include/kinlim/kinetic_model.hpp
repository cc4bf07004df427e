#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kinlim/moment_algebra.hpp"
#include "kinlim/rational.hpp"
#include "kinlim/spectral.hpp"
#include "kinlim/velocity_polynomial.hpp"

namespace kinlim {

// BGK relaxation L = nu0 (I - P), P the projection onto the collision
// invariants. Kernel, self-adjointness and invertibility on the orthogonal
// complement all hold exactly.
class BgkOperator {
 public:
  explicit BgkOperator(Rational nu0 = 1);

  const Rational& nu0() const { return nu0_; }

  VelocityPolynomial apply(const VelocityPolynomial& p) const;
  // Gamma(p, q) = L(p q) / 2 for every p, q.
  VelocityPolynomial gamma(const VelocityPolynomial& p, const VelocityPolynomial& q) const;

 private:
  Rational nu0_;
};

VelocityPolynomial apply_L(const BgkOperator& op, const VelocityPolynomial& p);
VelocityPolynomial gamma(const BgkOperator& op, const VelocityPolynomial& p, const VelocityPolynomial& q);

using AxisVector = std::array<VelocityPolynomial, 3>;
using AxisTensor = std::array<std::array<VelocityPolynomial, 3>, 3>;

// Pre-images of the heat flux vector A and stress tensor B. For BGK the
// radial factors alpha(|v|), beta(|v|) are the constant 1/nu0.
struct HatSolution {
  AxisVector a_hat;
  AxisTensor b_hat;
  Rational alpha;
  Rational beta;
};

HatSolution solve_hats(const BgkOperator& op);

struct TransportCoefficients {
  Rational kappa;  // heat conductivity
  Rational nu;     // viscosity
};

class TensorMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// kappa = (2/5) <A^_1, A_1>, nu = (3/4) <B^_11, B_11>; then all 9 vector and
// 81 tensor entries are checked against the isotropic forms. Throws
// TensorMismatch on the first disagreement.
TransportCoefficients transport_coefficients(const HatSolution& hats);

// Isotropic fourth-order form delta_ik delta_jl + delta_il delta_jk - (2/3) delta_ij delta_kl.
Rational isotropic_stress_form(int i, int j, int k, int l);

enum class RegimeClass { nsf, stokes, euler, out_of_scope };

std::string_view to_string(RegimeClass kind);

struct ScalingRegime {
  double r = 0.0;
  double q = 0.0;
  RegimeClass kind = RegimeClass::out_of_scope;
};

// NSF iff 0 < r = q < 1; Stokes iff 0 < q < min(1, r); Euler iff
// 0 < r < min(1, q); anything else (including r, q >= 1) is out of scope.
ScalingRegime classify_regime(double r, double q);

// Velocity profile of the forcing: f . v + (5/6) h (|v|^2 - 3). It lies in
// the collision invariant span, with zero mass moment, momentum moment f and
// moment (5/2) h against (|v|^2 - 5)/2.
inline constexpr long kHeatProfileNumerator = 5;
inline constexpr long kHeatProfileDenominator = 6;
VelocityPolynomial source_velocity_profile(const std::array<Rational, 3>& f, const Rational& h);

// Exponent s of the kinetic source scale eps^s; s = q in every regime.
double source_exponent(const ScalingRegime& regime);

// Forcing of the kinetic equation: S(x, v) = eps^s * profile(f(x), h(x)).
// f is solenoidal, f and h have zero spatial mean.
struct SourceSpec {
  PhysicalField f1;
  PhysicalField f2;
  PhysicalField h;
  double amplitude = 0.0;

  // f = a (sin m x2, 0), h = a sin m x1.
  static SourceSpec single_mode(const SpatialGrid& grid, double amplitude, int mode = 1);
  static SourceSpec zero(const SpatialGrid& grid);

  // Largest of |div f| (spectral sup norm), |mean f1|, |mean f2|, |mean h|.
  double constraint_defect(const Fft2d& fft) const;
  // Throws std::invalid_argument if constraint_defect exceeds tol.
  void validate(const Fft2d& fft, double tol = 1e-12) const;
};

// Moment-chain replay for g = rho + u . v + (|v|^2 - 3) theta / 2.
struct MomentChainReplay {
  // (1/2) <g^2, B_ij> and its closed form u_i u_j - |u|^2 delta_ij / 3.
  std::array<std::array<Rational, 3>, 3> stress;
  std::array<std::array<Rational, 3>, 3> stress_expected;
  // (1/2) <g^2, A_i> and its closed form (5/2) u_i theta.
  std::array<Rational, 3> heat_flux;
  std::array<Rational, 3> heat_flux_expected;
  // <Gamma(g, g), B^_ij> and <Gamma(g, g), A^_i>, which the limit uses.
  std::array<std::array<Rational, 3>, 3> gamma_stress;
  std::array<Rational, 3> gamma_heat_flux;
  // Unhalved <g^2, B_ij>, <g^2, A_i> for the record.
  std::array<std::array<Rational, 3>, 3> full_square_stress;
  std::array<Rational, 3> full_square_heat_flux;

  bool matches() const;
};

VelocityPolynomial hydrodynamic_polynomial(const Rational& rho, const std::array<Rational, 3>& u,
                                           const Rational& theta);

MomentChainReplay replay_moment_chain(const BgkOperator& op, const Rational& rho,
                                      const std::array<Rational, 3>& u, const Rational& theta);

}  // namespace kinlim
