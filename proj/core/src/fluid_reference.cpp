#include "kinlim/fluid_reference.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kinlim/errors.hpp"

namespace kinlim {
namespace {

double largest_coefficient(const SpectralField& field) {
  double m = 0.0;
  for (const auto& c : field.coeffs) m = std::max(m, std::abs(c));
  return m;
}

void require_zero_mean(const SpectralField& field, const char* what) {
  if (std::abs(field.mean()) > 1e-12 * (1.0 + largest_coefficient(field))) {
    std::ostringstream msg;
    msg << what << ": forcing has a nonzero mean mode (" << std::abs(field.mean()) << ")";
    throw SingularMode(msg.str());
  }
}

void drop_mean(SpectralField& field) { field.coeffs[0] = 0.0; }

// p with grad p equal to the gradient part of w.
SpectralField pressure_of(const SpatialGrid& grid, const SpectralVector& w) {
  SpectralField p(grid);
  for (int i = 0; i < grid.modes(); ++i) {
    const double d1 = grid.derivative_x1(i);
    for (int j = 0; j < grid.half_columns(); ++j) {
      const double d2 = grid.derivative_x2(j);
      const double d_sq = d1 * d1 + d2 * d2;
      if (d_sq == 0.0) continue;
      p.at(i, j) = std::complex<double>(0.0, -1.0) * (d1 * w.x1.at(i, j) + d2 * w.x2.at(i, j)) / d_sq;
    }
  }
  return p;
}

SpectralField pointwise_product_sum(const Fft2d& fft, const PhysicalField& a1, const SpectralField& b1,
                                    const PhysicalField& a2, const SpectralField& b2) {
  const PhysicalField p1 = to_physical(fft, b1);
  const PhysicalField p2 = to_physical(fft, b2);
  PhysicalField out(p1.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = a1[x] * p1[x] + a2[x] * p2[x];
  return to_spectral(fft, out);
}

}  // namespace

FluidState zero_state(const SpatialGrid& grid) {
  return FluidState{SpectralVector(grid), SpectralField(grid), SpectralField(grid), SpectralField(grid)};
}

SpectralVector leray_project(const SpatialGrid& grid, const SpectralVector& w) {
  SpectralVector out = w;
  for (int i = 0; i < grid.modes(); ++i) {
    const double k1 = grid.derivative_x1(i);
    for (int j = 0; j < grid.half_columns(); ++j) {
      const double k2 = grid.derivative_x2(j);
      const double k_sq = k1 * k1 + k2 * k2;
      if (k_sq == 0.0) continue;
      const std::complex<double> dot = (k1 * w.x1.at(i, j) + k2 * w.x2.at(i, j)) / k_sq;
      out.x1.at(i, j) -= k1 * dot;
      out.x2.at(i, j) -= k2 * dot;
    }
  }
  return out;
}

SpectralVector advect_vector(const Fft2d& fft, const SpectralVector& u, const SpectralVector& w) {
  const auto& grid = fft.grid();
  const PhysicalField u1 = to_physical(fft, u.x1);
  const PhysicalField u2 = to_physical(fft, u.x2);
  SpectralVector out;
  out.x1 = pointwise_product_sum(fft, u1, d_dx1(grid, w.x1), u2, d_dx2(grid, w.x1));
  out.x2 = pointwise_product_sum(fft, u1, d_dx1(grid, w.x2), u2, d_dx2(grid, w.x2));
  return out;
}

SpectralField advect_scalar(const Fft2d& fft, const SpectralVector& u, const SpectralField& theta) {
  const auto& grid = fft.grid();
  const PhysicalField u1 = to_physical(fft, u.x1);
  const PhysicalField u2 = to_physical(fft, u.x2);
  return pointwise_product_sum(fft, u1, d_dx1(grid, theta), u2, d_dx2(grid, theta));
}

SpectralField solve_heat(const SpatialGrid& grid, const SpectralField& h, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("solve_heat: kappa must be positive");
  require_zero_mean(h, "solve_heat");
  SpectralField theta(grid);
  for (int i = 0; i < grid.modes(); ++i) {
    const double k1 = grid.wavenumber_x1(i);
    for (int j = 0; j < grid.half_columns(); ++j) {
      const double k2 = grid.wavenumber_x2(j);
      const double k_sq = k1 * k1 + k2 * k2;
      if (k_sq == 0.0) continue;
      theta.at(i, j) = h.at(i, j) / (kappa * k_sq);
    }
  }
  return theta;
}

FluidState solve_stationary_stokes(const SpatialGrid& grid, const SpectralVector& f, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("solve_stationary_stokes: nu must be positive");
  require_zero_mean(f.x1, "solve_stationary_stokes");
  require_zero_mean(f.x2, "solve_stationary_stokes");
  FluidState state = zero_state(grid);
  const SpectralVector solenoidal = leray_project(grid, f);
  for (int i = 0; i < grid.modes(); ++i) {
    const double k1 = grid.wavenumber_x1(i);
    for (int j = 0; j < grid.half_columns(); ++j) {
      const double k2 = grid.wavenumber_x2(j);
      const double k_sq = k1 * k1 + k2 * k2;
      if (k_sq == 0.0) continue;
      state.u.x1.at(i, j) = solenoidal.x1.at(i, j) / (nu * k_sq);
      state.u.x2.at(i, j) = solenoidal.x2.at(i, j) / (nu * k_sq);
    }
  }
  state.p = pressure_of(grid, f);
  return state;
}

FluidState solve_stationary_stokes(const SpatialGrid& grid, const SpectralVector& f, const SpectralField& h,
                                   double nu, double kappa) {
  FluidState state = solve_stationary_stokes(grid, f, nu);
  state.theta = solve_heat(grid, h, kappa);
  state.rho = -1.0 * state.theta;
  return state;
}

std::pair<double, double> stokes_residual(const SpatialGrid& grid, const FluidState& state, const SpectralVector& f,
                                          const SpectralField& h, double nu, double kappa) {
  SpectralVector momentum;
  momentum.x1 = nu * laplacian(grid, state.u.x1) + f.x1;
  momentum.x2 = nu * laplacian(grid, state.u.x2) + f.x2;
  momentum -= gradient(grid, state.p);
  const SpectralField heat = kappa * laplacian(grid, state.theta) + h;
  return {l2_norm(grid, momentum), l2_norm(grid, heat)};
}

FluidState solve_stationary_nsf(const Fft2d& fft, const SpectralVector& f, const SpectralField& h, double nu,
                                double kappa, const NsfOptions& options) {
  if (!(nu > 0.0) || !(kappa > 0.0)) throw std::invalid_argument("solve_stationary_nsf: nu and kappa must be positive");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_stationary_nsf: tol must be positive");
  const auto& grid = fft.grid();
  FluidState state = solve_stationary_stokes(grid, f, h, nu, kappa);

  double previous_change = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    // Discrete means of the advective terms are dropped.
    SpectralVector convection = advect_vector(fft, state.u, state.u);
    drop_mean(convection.x1);
    drop_mean(convection.x2);
    SpectralField heat_advection = advect_scalar(fft, state.u, state.theta);
    drop_mean(heat_advection);

    FluidState next = solve_stationary_stokes(grid, f - leray_project(grid, convection), h - heat_advection, nu, kappa);
    const double change = l2_norm(grid, next.u - state.u) + l2_norm(grid, next.theta - state.theta);
    next.p = pressure_of(grid, f - convection);
    state = std::move(next);

    if (!std::isfinite(change)) throw NoContraction("solve_stationary_nsf: iterates diverged");
    if (change < options.tol) {
      const auto [ru, rt] = nsf_residual(fft, state, f, h, nu, kappa);
      if (ru < 10.0 * options.tol && rt < 10.0 * options.tol) return state;
    }
    stalled = change >= previous_change ? stalled + 1 : 0;
    if (stalled >= options.stall_limit) {
      std::ostringstream msg;
      msg << "solve_stationary_nsf: iterate change stopped decreasing at " << change << " after " << iteration
          << " iterations; reduce the forcing amplitude";
      throw NoContraction(msg.str());
    }
    previous_change = change;
  }
  throw NoContraction("solve_stationary_nsf: iteration limit reached");
}

std::pair<double, double> nsf_residual(const Fft2d& fft, const FluidState& state, const SpectralVector& f,
                                       const SpectralField& h, double nu, double kappa) {
  const auto& grid = fft.grid();
  SpectralVector convection = advect_vector(fft, state.u, state.u);
  drop_mean(convection.x1);
  drop_mean(convection.x2);
  SpectralVector momentum = leray_project(grid, convection - f);
  momentum.x1 -= nu * laplacian(grid, state.u.x1);
  momentum.x2 -= nu * laplacian(grid, state.u.x2);
  SpectralField heat = advect_scalar(fft, state.u, state.theta) - kappa * laplacian(grid, state.theta) - h;
  drop_mean(heat);
  return {l2_norm(grid, momentum), l2_norm(grid, heat)};
}

std::pair<double, double> euler_residual(const Fft2d& fft, const FluidState& state, const SpectralVector& f,
                                         const SpectralField& h) {
  const auto& grid = fft.grid();
  const SpectralVector momentum = leray_project(grid, advect_vector(fft, state.u, state.u) - f);
  const SpectralField heat = advect_scalar(fft, state.u, state.theta) - h;
  return {l2_norm(grid, momentum), l2_norm(grid, heat)};
}

FluidState fluid_state_from_moments(const Fft2d& fft, const MomentFields& moments) {
  FluidState state = zero_state(fft.grid());
  state.rho = to_spectral(fft, moments.rho);
  state.u.x1 = to_spectral(fft, moments.u1);
  state.u.x2 = to_spectral(fft, moments.u2);
  state.theta = to_spectral(fft, moments.theta);
  return state;
}

}  // namespace kinlim
