#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kinlim/kinetic_model.hpp"
#include "kinlim/rational.hpp"

namespace kinlim {

inline constexpr int kSweepSchemaVersion = 1;

struct ExperimentConfig {
  double r = 0.5;
  double q = 0.5;
  std::vector<double> epsilon_ladder{0.2, 0.1, 0.05};
  int modes = 32;
  int nodes_per_axis = 8;
  double nu0 = 1.0;
  double amplitude = 0.05;
  int forcing_mode = 1;
  double dt_safety = 0.5;
  double steady_tol = 1e-8;
  long max_steps = 200000;
  double fluid_tol = 1e-12;
  int threads = 1;
  std::filesystem::path output_dir = "kinlim-out";
  bool snapshots = false;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class ComparisonTarget { navier_stokes_fourier, stokes, euler_residuals };

std::string_view to_string(ComparisonTarget target);
// Throws std::invalid_argument for out-of-scope regimes.
ComparisonTarget comparison_target(const ScalingRegime& regime);

struct SweepRow {
  double epsilon = 0.0;
  // NaN when the regime has no reference state.
  double u_error = std::numeric_limits<double>::quiet_NaN();
  double theta_error = std::numeric_limits<double>::quiet_NaN();
  double boussinesq_residual = 0.0;  // ||grad(rho + theta)||
  double div_u_residual = 0.0;       // ||div u||
  // Residuals of the forced stationary Euler system, forcing scaled by eps^(s - r).
  double euler_momentum_residual = 0.0;
  double euler_heat_residual = 0.0;
  double u3_norm = 0.0;
  long steps = 0;
  double step_residual = 0.0;
  double time_step = 0.0;
  double relaxation_number = 0.0;
  double wall_time = 0.0;  // seconds; JSON only
};

struct SweepReport {
  ExperimentConfig config;
  ScalingRegime regime;
  ComparisonTarget target = ComparisonTarget::navier_stokes_fourier;
  Rational kappa;
  Rational nu;
  std::vector<SweepRow> rows;
  // Least-squares slope of log(metric) against log(eps); NaN if fewer than
  // two positive points.
  std::string fitted_metric;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
};

double fit_log_log_slope(std::span<const double> x, std::span<const double> y);

SweepReport cmd_sweep(const ExperimentConfig& config);

// Fixed, versioned columns; no timing, so identical configs give identical bytes.
void write_sweep_csv(const SweepReport& report, std::ostream& out);
std::string sweep_json(const SweepReport& report);
// Writes report.csv and report.json into config.output_dir.
void write_sweep_outputs(const SweepReport& report);

struct RelaxCase {
  double epsilon = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  long steps = 0;
  double final_decay = 0.0;     // closed-form factor at the last step
  double max_deviation = 0.0;   // sup_n | ||g_n - P g_0|| / ||g_0 - P g_0|| - e^{-n lambda} |
  double kernel_drift = 0.0;    // sup_n ||P g_n - P g_0|| / ||g_0||
};

struct RelaxReport {
  std::vector<RelaxCase> cases;
  double tolerance = 1e-10;
  bool passed() const;
};

// Homogeneous linear relaxation from a fixed non-equilibrium state, followed
// until the closed-form factor drops below 10^-decades.
RelaxReport cmd_relax_test(std::span<const double> epsilons, std::span<const double> qs, double nu0 = 1.0,
                           int modes = 8, int nodes_per_axis = 8, double decades = 3.0);

// "kappa=<k> nu=<n>" for BGK with the given collision frequency.
std::string cmd_coefficients(const Rational& nu0);

// Merges report.json files found in the given files or directories into
// {"reports": [...]}. Throws EmptyInput when nothing is found.
std::string cmd_report(std::span<const std::filesystem::path> paths);

struct AlgebraCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AlgebraOptions {
  Rational nu0 = 1;
  std::uint64_t seed = 20240607;
  int random_pairs = 128;
  int max_degree = 6;
  // Negative control: perturbs B^_12 before the tensor identity is checked.
  bool corrupt_b_hat = false;
};

struct AlgebraReport {
  std::vector<AlgebraCheck> checks;
  Rational kappa;
  Rational nu;
  // kappa = (2/15) alpha <r^6>, nu = (1/6) beta <(r^2-5)^2 r^4> evaluated at
  // the BGK radial factors, and the swapped forms with prefactors 1/15 and 2/15.
  Rational radial_kappa_stated;
  Rational radial_nu_stated;
  Rational radial_kappa_corrected;
  Rational radial_nu_corrected;
  std::string radial_verdict;

  bool all_passed() const;
};

AlgebraReport cmd_verify_algebra(const AlgebraOptions& options = {});
void print_algebra_report(const AlgebraReport& report, std::ostream& out);

}  // namespace kinlim
