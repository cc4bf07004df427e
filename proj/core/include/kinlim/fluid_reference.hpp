#pragma once

#include <utility>

#include "kinlim/kinetic_solver.hpp"
#include "kinlim/spectral.hpp"

namespace kinlim {

struct FluidState {
  SpectralVector u;
  SpectralField p;
  SpectralField theta;
  SpectralField rho;
};

FluidState zero_state(const SpatialGrid& grid);

// w - k (k . w) / |k|^2 per mode, with k the discrete derivative symbol.
// Modes with a vanishing symbol (the mean and the pure Nyquist modes) pass
// through unchanged.
SpectralVector leray_project(const SpatialGrid& grid, const SpectralVector& w);

// (u . grad) u and u . grad theta, products formed pointwise on the grid.
SpectralVector advect_vector(const Fft2d& fft, const SpectralVector& u, const SpectralVector& w);
SpectralField advect_scalar(const Fft2d& fft, const SpectralVector& u, const SpectralField& theta);

// -kappa Lap theta = h, mean of theta pinned to zero.
SpectralField solve_heat(const SpatialGrid& grid, const SpectralField& h, double kappa);

// grad p = nu Lap u + f, div u = 0, mean u = 0. theta and rho stay zero.
FluidState solve_stationary_stokes(const SpatialGrid& grid, const SpectralVector& f, double nu);
// Same with the stationary heat equation kappa Lap theta + h = 0, rho = -theta.
FluidState solve_stationary_stokes(const SpatialGrid& grid, const SpectralVector& f, const SpectralField& h,
                                   double nu, double kappa);

// ||nu Lap u + f - grad p|| and ||kappa Lap theta + h||.
std::pair<double, double> stokes_residual(const SpatialGrid& grid, const FluidState& state, const SpectralVector& f,
                                          const SpectralField& h, double nu, double kappa);

struct NsfOptions {
  double tol = 1e-12;
  int max_iterations = 1000;
  int stall_limit = 20;
};

// u . grad u + grad p = nu Lap u + f, u . grad theta = kappa Lap theta + h,
// div u = 0, rho = -theta, by Picard iteration on the Stokes and heat solves.
FluidState solve_stationary_nsf(const Fft2d& fft, const SpectralVector& f, const SpectralField& h, double nu,
                                double kappa, const NsfOptions& options = {});

// ||P(u . grad u) - nu Lap u - P f|| and ||u . grad theta - kappa Lap theta - h||
// over the nonzero modes.
std::pair<double, double> nsf_residual(const Fft2d& fft, const FluidState& state, const SpectralVector& f,
                                       const SpectralField& h, double nu, double kappa);

// (||P(u . grad u - f)||, ||u . grad theta - h||).
std::pair<double, double> euler_residual(const Fft2d& fft, const FluidState& state, const SpectralVector& f,
                                         const SpectralField& h);

// rho, (u1, u2) and theta of a kinetic moment set; p is left zero.
FluidState fluid_state_from_moments(const Fft2d& fft, const MomentFields& moments);

}  // namespace kinlim
