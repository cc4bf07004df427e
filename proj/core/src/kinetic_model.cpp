#include "kinlim/kinetic_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kinlim {

BgkOperator::BgkOperator(Rational nu0) : nu0_(std::move(nu0)) {
  if (nu0_ <= 0) throw std::invalid_argument("BgkOperator: nu0 must be positive");
}

VelocityPolynomial BgkOperator::apply(const VelocityPolynomial& p) const {
  return (p - project_collision_invariants(p)) * nu0_;
}

VelocityPolynomial BgkOperator::gamma(const VelocityPolynomial& p, const VelocityPolynomial& q) const {
  return apply(p * q) * make_rational(1, 2);
}

VelocityPolynomial apply_L(const BgkOperator& op, const VelocityPolynomial& p) { return op.apply(p); }

VelocityPolynomial gamma(const BgkOperator& op, const VelocityPolynomial& p, const VelocityPolynomial& q) {
  return op.gamma(p, q);
}

HatSolution solve_hats(const BgkOperator& op) {
  HatSolution hats;
  hats.alpha = 1 / op.nu0();
  hats.beta = 1 / op.nu0();
  for (Axis i : kAxes) {
    hats.a_hat[index(i)] = make_A(i) * hats.alpha;
    for (Axis j : kAxes) hats.b_hat[index(i)][index(j)] = make_B(i, j) * hats.beta;
  }
  for (Axis i : kAxes) {
    const auto& a_hat = hats.a_hat[index(i)];
    if (op.apply(a_hat) != make_A(i) || !project_collision_invariants(a_hat).is_zero()) {
      throw std::logic_error("solve_hats: L(A^) != A");
    }
    for (Axis j : kAxes) {
      const auto& b_hat = hats.b_hat[index(i)][index(j)];
      if (op.apply(b_hat) != make_B(i, j) || !project_collision_invariants(b_hat).is_zero()) {
        throw std::logic_error("solve_hats: L(B^) != B");
      }
    }
  }
  return hats;
}

Rational isotropic_stress_form(int i, int j, int k, int l) {
  auto d = [](int a, int b) { return a == b ? 1 : 0; };
  return Rational(d(i, k) * d(j, l) + d(i, l) * d(j, k)) - make_rational(2, 3) * d(i, j) * d(k, l);
}

TransportCoefficients transport_coefficients(const HatSolution& hats) {
  TransportCoefficients tc;
  tc.kappa = make_rational(2, 5) * inner_product(hats.a_hat[0], make_A(Axis::v1));
  tc.nu = make_rational(3, 4) * inner_product(hats.b_hat[0][0], make_B(Axis::v1, Axis::v1));

  for (Axis i : kAxes) {
    for (Axis j : kAxes) {
      const Rational value = inner_product(hats.a_hat[index(i)], make_A(j));
      const Rational expected = i == j ? make_rational(5, 2) * tc.kappa : Rational(0);
      if (value != expected) {
        std::ostringstream msg;
        msg << "<A^_" << index(i) + 1 << ", A_" << index(j) + 1 << "> = " << to_string(value)
            << ", expected " << to_string(expected);
        throw TensorMismatch(msg.str());
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const Rational value = inner_product(hats.b_hat[i][j], make_B(kAxes[k], kAxes[l]));
          const Rational expected = tc.nu * isotropic_stress_form(i, j, k, l);
          if (value != expected) {
            std::ostringstream msg;
            msg << "<B^_" << i + 1 << j + 1 << ", B_" << k + 1 << l + 1 << "> = " << to_string(value)
                << ", expected " << to_string(expected);
            throw TensorMismatch(msg.str());
          }
        }
      }
    }
  }
  return tc;
}

std::string_view to_string(RegimeClass kind) {
  switch (kind) {
    case RegimeClass::nsf: return "nsf";
    case RegimeClass::stokes: return "stokes";
    case RegimeClass::euler: return "euler";
    case RegimeClass::out_of_scope: return "out_of_scope";
  }
  return "unknown";
}

ScalingRegime classify_regime(double r, double q) {
  ScalingRegime regime{r, q, RegimeClass::out_of_scope};
  if (!(r > 0.0) || !(q > 0.0) || !std::isfinite(r) || !std::isfinite(q)) return regime;
  if (r == q && r < 1.0) {
    regime.kind = RegimeClass::nsf;
  } else if (q < std::min(1.0, r)) {
    regime.kind = RegimeClass::stokes;
  } else if (r < std::min(1.0, q)) {
    regime.kind = RegimeClass::euler;
  }
  return regime;
}

VelocityPolynomial source_velocity_profile(const std::array<Rational, 3>& f, const Rational& h) {
  VelocityPolynomial s;
  for (Axis i : kAxes) s += VelocityPolynomial::velocity(i) * f[index(i)];
  s += (VelocityPolynomial::speed_squared() - VelocityPolynomial(3)) *
       (make_rational(kHeatProfileNumerator, kHeatProfileDenominator) * h);
  return s;
}

double source_exponent(const ScalingRegime& regime) { return regime.q; }

SourceSpec SourceSpec::single_mode(const SpatialGrid& grid, double amplitude, int mode) {
  if (mode < 1 || mode >= grid.modes() / 2) throw std::invalid_argument("SourceSpec: forcing mode out of range");
  SourceSpec s = zero(grid);
  s.amplitude = amplitude;
  const int m = grid.modes();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * m + j;
      s.f1[idx] = amplitude * std::sin(mode * grid.coordinate(j));
      s.h[idx] = amplitude * std::sin(mode * grid.coordinate(i));
    }
  }
  return s;
}

SourceSpec SourceSpec::zero(const SpatialGrid& grid) {
  SourceSpec s;
  s.f1.assign(grid.points(), 0.0);
  s.f2.assign(grid.points(), 0.0);
  s.h.assign(grid.points(), 0.0);
  return s;
}

double SourceSpec::constraint_defect(const Fft2d& fft) const {
  const SpatialGrid& grid = fft.grid();
  if (f1.size() != grid.points() || f2.size() != grid.points() || h.size() != grid.points()) {
    throw std::invalid_argument("SourceSpec: field size does not match grid");
  }
  SpectralVector f{to_spectral(fft, f1), to_spectral(fft, f2)};
  const SpectralField hs = to_spectral(fft, h);
  double defect = std::max({std::abs(f.x1.mean()), std::abs(f.x2.mean()), std::abs(hs.mean())});
  for (const auto& c : divergence(grid, f).coeffs) defect = std::max(defect, std::abs(c));
  return defect;
}

void SourceSpec::validate(const Fft2d& fft, double tol) const {
  const double defect = constraint_defect(fft);
  if (!(defect <= tol)) {
    std::ostringstream msg;
    msg << "SourceSpec: forcing must be solenoidal with zero means (defect " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
}

VelocityPolynomial hydrodynamic_polynomial(const Rational& rho, const std::array<Rational, 3>& u,
                                           const Rational& theta) {
  VelocityPolynomial g(rho);
  for (Axis i : kAxes) g += VelocityPolynomial::velocity(i) * u[index(i)];
  g += (VelocityPolynomial::speed_squared() - VelocityPolynomial(3)) * (theta / 2);
  return g;
}

MomentChainReplay replay_moment_chain(const BgkOperator& op, const Rational& rho,
                                      const std::array<Rational, 3>& u, const Rational& theta) {
  const VelocityPolynomial g = hydrodynamic_polynomial(rho, u, theta);
  const VelocityPolynomial g2 = g * g;
  const VelocityPolynomial gam = op.gamma(g, g);
  const HatSolution hats = solve_hats(op);
  const Rational half = make_rational(1, 2);
  Rational u_sq = 0;
  for (const auto& c : u) u_sq += c * c;

  MomentChainReplay out;
  for (int i = 0; i < 3; ++i) {
    const VelocityPolynomial a = make_A(kAxes[i]);
    out.full_square_heat_flux[i] = inner_product(g2, a);
    out.heat_flux[i] = half * out.full_square_heat_flux[i];
    out.heat_flux_expected[i] = make_rational(5, 2) * u[i] * theta;
    out.gamma_heat_flux[i] = inner_product(gam, hats.a_hat[i]);
    for (int j = 0; j < 3; ++j) {
      out.full_square_stress[i][j] = inner_product(g2, make_B(kAxes[i], kAxes[j]));
      out.stress[i][j] = half * out.full_square_stress[i][j];
      out.stress_expected[i][j] = u[i] * u[j] - (i == j ? u_sq / 3 : Rational(0));
      out.gamma_stress[i][j] = inner_product(gam, hats.b_hat[i][j]);
    }
  }
  return out;
}

bool MomentChainReplay::matches() const {
  for (int i = 0; i < 3; ++i) {
    if (heat_flux[i] != heat_flux_expected[i] || gamma_heat_flux[i] != heat_flux_expected[i]) return false;
    for (int j = 0; j < 3; ++j) {
      if (stress[i][j] != stress_expected[i][j] || gamma_stress[i][j] != stress_expected[i][j]) return false;
    }
  }
  return true;
}

}  // namespace kinlim
