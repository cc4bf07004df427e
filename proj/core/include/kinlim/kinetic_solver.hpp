#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "kinlim/kinetic_model.hpp"
#include "kinlim/spectral.hpp"
#include "kinlim/velocity_grid.hpp"

namespace kinlim {

// g(x_j, v_k) on an M x M spatial grid times an N^3 velocity grid. Storage is
// velocity major: each velocity node owns a contiguous M*M spatial slice.
class DistributionField {
 public:
  DistributionField() = default;
  DistributionField(std::size_t points, std::size_t velocities)
      : points_(points), velocities_(velocities), data_(points * velocities, 0.0) {}

  std::size_t points() const { return points_; }
  std::size_t velocities() const { return velocities_; }

  std::span<double> node(std::size_t k) { return {data_.data() + k * points_, points_}; }
  std::span<const double> node(std::size_t k) const { return {data_.data() + k * points_, points_}; }
  double& at(std::size_t point, std::size_t k) { return data_[k * points_ + point]; }
  double at(std::size_t point, std::size_t k) const { return data_[k * points_ + point]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const DistributionField& a, const DistributionField& b) {
    return a.points_ == b.points_ && a.velocities_ == b.velocities_ && a.data_ == b.data_;
  }

 private:
  std::size_t points_ = 0;
  std::size_t velocities_ = 0;
  RealBuffer data_;
};

struct SolverConfig {
  double epsilon = 0.1;
  ScalingRegime regime = classify_regime(0.5, 0.5);
  double nu0 = 1.0;
  double dt_safety = 0.5;
  double steady_tol = 1e-8;
  long max_steps = 200000;
  SourceSpec source;
  // Gamma(g, g) on or off; off gives the linear BGK relaxation.
  bool nonlinear = true;
  // Worker threads for transport and collision. Results do not depend on it.
  int threads = 1;
};

// rho = <g, 1>_h, u_i = <g, v_i>_h, theta = <g, (|v|^2 - 3)/3>_h, pointwise.
// u3 is carried as a diagnostic; space is two dimensional.
struct MomentFields {
  PhysicalField rho;
  PhysicalField u1;
  PhysicalField u2;
  PhysicalField u3;
  PhysicalField theta;
};

struct SteadyState {
  DistributionField g;
  long steps = 0;
  double residual = 0.0;
};

// Solves eps d_t g + v . grad_x g + eps^{-q} L g = eps^{r-q} Gamma(g, g) + S
// with Strang splitting: half transport, collision plus source, half
// transport. Transport is an exact Fourier phase shift and BGK relaxation is
// integrated exactly, so neither stiff piece restricts dt.
class KineticSolver {
 public:
  KineticSolver(const SpatialGrid& space, const VelocityGrid& velocity, SolverConfig config);
  ~KineticSolver();
  KineticSolver(const KineticSolver&) = delete;
  KineticSolver& operator=(const KineticSolver&) = delete;

  const SpatialGrid& space() const { return space_; }
  const VelocityGrid& velocity() const { return velocity_; }
  const SolverConfig& config() const { return config_; }
  const Fft2d& fft() const { return *fft_; }

  // dt = dt_safety * eps * dx / max |v_i|.
  double time_step() const { return dt_; }
  // nu0 dt / eps^(1+q) for the configured step.
  double relaxation_number() const { return lambda_; }

  DistributionField zero_field() const;

  // Exact solution of d_t g = -(1/eps) (v1, v2) . grad_x g over dt.
  void transport_step(DistributionField& g, double dt) const;
  // g <- P g + e^{-lam} (g - P g) + (1 - e^{-lam}) eps^r (g^2)_perp / 2, with
  // lam = nu0 dt / eps^(1+q): the exact frozen-Gamma solution of the
  // collision ODE. Mass, momentum and energy moments are untouched.
  void collision_step(DistributionField& g, double dt) const;
  // g <- g + (dt/eps) S(x, v).
  void apply_source(DistributionField& g, double dt) const;
  // One Strang step of length time_step().
  void step(DistributionField& g) const;

  // ||g_new - g_old|| / (dt ||g_old|| + 1e-14) in the L2(dx M dv) norm.
  double step_residual(const DistributionField& previous, const DistributionField& next) const;

  // Steps until step_residual < steady_tol; throws NotConverged after
  // max_steps.
  SteadyState run_to_steady(DistributionField g0) const;

  MomentFields extract_moments(const DistributionField& g) const;

  // Spatial means of <g,1>, <g,v1>, <g,v2>, <g,v3>, <g,|v|^2>.
  std::array<double, 5> conserved_means(const DistributionField& g) const;

  // eps^s with s = source_exponent(regime).
  double source_scale() const;

 private:
  template <typename Fn>
  void parallel_for(std::size_t count, Fn&& fn) const;

  SpatialGrid space_;
  VelocityGrid velocity_;
  SolverConfig config_;
  std::unique_ptr<Fft2d> fft_;
  double dt_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> heat_profile_;  // (5/6)(|v_k|^2 - 3)
};

double discrete_l2_norm(const SpatialGrid& space, const VelocityGrid& velocity, const DistributionField& g);

// Fills g with samples of a velocity polynomial times a spatial field.
void add_separable(DistributionField& g, const VelocityGrid& velocity, std::span<const double> spatial,
                   const VelocityPolynomial& profile);

}  // namespace kinlim
