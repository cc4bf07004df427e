#include "kinlim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "kinlim/array_file.hpp"
#include "kinlim/errors.hpp"
#include "kinlim/fluid_reference.hpp"
#include "kinlim/kinetic_solver.hpp"
#include "kinlim/moment_algebra.hpp"
#include "kinlim/velocity_grid.hpp"

namespace kinlim {
namespace {

using nlohmann::json;

constexpr double kErrorFloor = 1e-14;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("ExperimentConfig: " + what);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double relative_error(double difference, double reference) { return difference / std::max(reference, kErrorFloor); }

}  // namespace

void ExperimentConfig::validate() const {
  require(std::isfinite(r) && std::isfinite(q), "r and q must be finite");
  require(classify_regime(r, q).kind != RegimeClass::out_of_scope, "regime (r, q) is out of scope");
  require(!epsilon_ladder.empty(), "epsilon ladder is empty");
  for (std::size_t i = 0; i < epsilon_ladder.size(); ++i) {
    const double e = epsilon_ladder[i];
    require(std::isfinite(e) && e > 0.0 && e <= 0.5, "each epsilon must lie in (0, 0.5]");
    if (i > 0) require(e < epsilon_ladder[i - 1], "epsilon ladder must be strictly decreasing");
  }
  require(modes >= 4 && modes % 2 == 0, "modes must be even and >= 4");
  require(nodes_per_axis >= 4 && nodes_per_axis % 2 == 0, "nodes per axis must be even and >= 4");
  require(std::isfinite(nu0) && nu0 > 0.0, "nu0 must be positive");
  require(std::isfinite(amplitude) && amplitude >= 0.0, "amplitude must be non-negative");
  require(forcing_mode >= 1 && forcing_mode < modes / 2, "forcing mode must lie in [1, modes/2)");
  require(dt_safety > 0.0 && dt_safety <= 1.0, "dt_safety must lie in (0, 1]");
  require(steady_tol > 0.0, "steady_tol must be positive");
  require(max_steps >= 1, "max_steps must be >= 1");
  require(fluid_tol > 0.0, "fluid_tol must be positive");
  require(threads >= 1, "threads must be >= 1");
}

std::string_view to_string(ComparisonTarget target) {
  switch (target) {
    case ComparisonTarget::navier_stokes_fourier: return "navier-stokes-fourier";
    case ComparisonTarget::stokes: return "stokes";
    case ComparisonTarget::euler_residuals: return "euler-residuals";
  }
  return "unknown";
}

ComparisonTarget comparison_target(const ScalingRegime& regime) {
  switch (regime.kind) {
    case RegimeClass::nsf: return ComparisonTarget::navier_stokes_fourier;
    case RegimeClass::stokes: return ComparisonTarget::stokes;
    case RegimeClass::euler: return ComparisonTarget::euler_residuals;
    case RegimeClass::out_of_scope: break;
  }
  throw std::invalid_argument("comparison_target: regime is out of scope");
}

double fit_log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_log_log_slope: size mismatch");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

SweepReport cmd_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepReport report;
  report.config = config;
  report.regime = classify_regime(config.r, config.q);
  report.target = comparison_target(report.regime);

  const BgkOperator op{Rational(config.nu0)};
  const TransportCoefficients tc = transport_coefficients(solve_hats(op));
  report.kappa = tc.kappa;
  report.nu = tc.nu;
  const double kappa = to_double(tc.kappa);
  const double nu = to_double(tc.nu);

  const SpatialGrid space(config.modes);
  const VelocityGrid velocity = build_velocity_grid(config.nodes_per_axis);
  const Fft2d fft(space);
  const SourceSpec source = SourceSpec::single_mode(space, config.amplitude, config.forcing_mode);
  const SpectralVector f(to_spectral(fft, source.f1), to_spectral(fft, source.f2));
  const SpectralField h = to_spectral(fft, source.h);

  FluidState reference = zero_state(space);
  const bool has_reference = report.target != ComparisonTarget::euler_residuals;
  try {
    if (report.target == ComparisonTarget::navier_stokes_fourier) {
      NsfOptions options;
      options.tol = config.fluid_tol;
      reference = solve_stationary_nsf(fft, f, h, nu, kappa, options);
    } else if (report.target == ComparisonTarget::stokes) {
      reference = solve_stationary_stokes(space, f, h, nu, kappa);
    }
  } catch (const NoContraction& e) {
    throw NoContraction(std::string("reference solve: ") + e.what());
  }
  const double u_ref_norm = l2_norm(space, reference.u);
  const double theta_ref_norm = l2_norm(space, reference.theta);

  if (config.snapshots) {
    std::filesystem::create_directories(config.output_dir);
    if (has_reference) {
      export_fluid_state(config.output_dir / "reference.klarray", fft, reference,
                         json{{"kind", "fluid-reference"}, {"target", std::string(to_string(report.target))}}.dump());
    }
  }

  for (std::size_t idx = 0; idx < config.epsilon_ladder.size(); ++idx) {
    const double eps = config.epsilon_ladder[idx];
    SolverConfig sc;
    sc.epsilon = eps;
    sc.regime = report.regime;
    sc.nu0 = config.nu0;
    sc.dt_safety = config.dt_safety;
    sc.steady_tol = config.steady_tol;
    sc.max_steps = config.max_steps;
    sc.source = source;
    sc.threads = config.threads;
    const KineticSolver solver(space, velocity, sc);

    const auto start = std::chrono::steady_clock::now();
    SteadyState steady;
    try {
      steady = solver.run_to_steady(solver.zero_field());
    } catch (const NotConverged& e) {
      throw NotConverged("epsilon=" + format_number(eps) + ": " + e.what(), e.residual(), e.steps());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const MomentFields moments = solver.extract_moments(steady.g);
    const FluidState state = fluid_state_from_moments(fft, moments);

    SweepRow row;
    row.epsilon = eps;
    if (has_reference) {
      row.u_error = relative_error(l2_norm(space, state.u - reference.u), u_ref_norm);
      row.theta_error = relative_error(l2_norm(space, state.theta - reference.theta), theta_ref_norm);
    }
    row.boussinesq_residual = l2_norm(space, gradient(space, state.rho + state.theta));
    row.div_u_residual = l2_norm(space, divergence(space, state.u));
    const double forcing_scale = std::pow(eps, source_exponent(report.regime) - report.regime.r);
    const auto [euler_u, euler_theta] = euler_residual(fft, state, forcing_scale * f, forcing_scale * h);
    row.euler_momentum_residual = euler_u;
    row.euler_heat_residual = euler_theta;
    row.u3_norm = l2_norm(space, moments.u3);
    row.steps = steady.steps;
    row.step_residual = steady.residual;
    row.time_step = solver.time_step();
    row.relaxation_number = solver.relaxation_number();
    row.wall_time = wall;
    report.rows.push_back(row);

    if (config.snapshots) {
      const std::string tag = "eps" + std::to_string(idx);
      save_checkpoint(config.output_dir / ("checkpoint_" + tag + ".klarray"),
                      checkpoint_info(solver, steady.steps, steady.residual), steady.g);
      export_fluid_state(config.output_dir / ("moments_" + tag + ".klarray"), fft, state,
                         json{{"kind", "kinetic-moments"}, {"epsilon", eps}}.dump());
    }
  }

  std::vector<double> eps;
  std::vector<double> metric;
  for (const auto& row : report.rows) {
    eps.push_back(row.epsilon);
    metric.push_back(has_reference ? row.u_error : row.euler_momentum_residual);
  }
  report.fitted_metric = has_reference ? "u_error" : "euler_momentum_residual";
  report.fitted_order = fit_log_log_slope(eps, metric);
  return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "# kinlim-sweep schema_version=" << kSweepSchemaVersion << '\n';
  out << "epsilon,u_error,theta_error,boussinesq_residual,div_u_residual,euler_momentum_residual,"
         "euler_heat_residual,u3_norm,steps,step_residual,time_step,relaxation_number\n";
  for (const auto& row : report.rows) {
    out << format_number(row.epsilon) << ',' << format_number(row.u_error) << ',' << format_number(row.theta_error)
        << ',' << format_number(row.boussinesq_residual) << ',' << format_number(row.div_u_residual) << ','
        << format_number(row.euler_momentum_residual) << ',' << format_number(row.euler_heat_residual) << ','
        << format_number(row.u3_norm) << ',' << row.steps << ',' << format_number(row.step_residual) << ','
        << format_number(row.time_step) << ',' << format_number(row.relaxation_number) << '\n';
  }
}

std::string sweep_json(const SweepReport& report) {
  const auto& c = report.config;
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"u_error", number_or_null(row.u_error)},
                    {"theta_error", number_or_null(row.theta_error)},
                    {"boussinesq_residual", row.boussinesq_residual},
                    {"div_u_residual", row.div_u_residual},
                    {"euler_residuals", {row.euler_momentum_residual, row.euler_heat_residual}},
                    {"u3_norm", row.u3_norm},
                    {"steps", row.steps},
                    {"step_residual", row.step_residual},
                    {"time_step", row.time_step},
                    {"relaxation_number", row.relaxation_number},
                    {"wall_time", row.wall_time}});
  }
  json doc = {
      {"schema_version", kSweepSchemaVersion},
      {"regime",
       {{"r", report.regime.r}, {"q", report.regime.q}, {"class", std::string(to_string(report.regime.kind))}}},
      {"comparison_target", std::string(to_string(report.target))},
      {"coefficients",
       {{"kappa", to_string(report.kappa)},
        {"nu", to_string(report.nu)},
        {"kappa_value", to_double(report.kappa)},
        {"nu_value", to_double(report.nu)}}},
      {"config",
       {{"epsilon_ladder", c.epsilon_ladder},
        {"modes", c.modes},
        {"nodes_per_axis", c.nodes_per_axis},
        {"nu0", c.nu0},
        {"amplitude", c.amplitude},
        {"forcing_mode", c.forcing_mode},
        {"dt_safety", c.dt_safety},
        {"steady_tol", c.steady_tol},
        {"max_steps", c.max_steps},
        {"fluid_tol", c.fluid_tol},
        {"threads", c.threads}}},
      {"rows", rows},
      {"fitted_metric", report.fitted_metric},
      {"fitted_order", number_or_null(report.fitted_order)}};
  return doc.dump(2);
}

void write_sweep_outputs(const SweepReport& report) {
  const auto& dir = report.config.output_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "report.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error((dir / "report.csv").string() + ": cannot open for writing");
    write_sweep_csv(report, csv);
  }
  std::ofstream js(dir / "report.json", std::ios::binary | std::ios::trunc);
  if (!js) throw std::runtime_error((dir / "report.json").string() + ": cannot open for writing");
  js << sweep_json(report) << '\n';
}

bool RelaxReport::passed() const {
  return !cases.empty() && std::all_of(cases.begin(), cases.end(), [&](const RelaxCase& c) {
    return c.max_deviation < tolerance && c.kernel_drift < tolerance;
  });
}

RelaxReport cmd_relax_test(std::span<const double> epsilons, std::span<const double> qs, double nu0, int modes,
                           int nodes_per_axis, double decades) {
  if (!(decades > 0.0)) throw std::invalid_argument("cmd_relax_test: decades must be positive");
  const SpatialGrid space(modes);
  const VelocityGrid velocity = build_velocity_grid(nodes_per_axis);

  // A fixed state with both kernel and non-kernel parts.
  using P = VelocityPolynomial;
  const P v1 = P::velocity(Axis::v1);
  const P v2 = P::velocity(Axis::v2);
  const P v3 = P::velocity(Axis::v3);
  const P profile = P(make_rational(3, 10)) + v1 * make_rational(1, 5) + P::speed_squared() * make_rational(1, 10) +
                    (v1 * v1 - v2 * v2) * make_rational(1, 2) + v1 * v2 * v3 + v3 * v3 * v3 * make_rational(1, 4);
  const std::vector<double> samples = velocity.sample(profile);
  const std::vector<double> kernel = velocity.project(samples);

  RelaxReport report;
  for (double eps : epsilons) {
    for (double q : qs) {
      SolverConfig sc;
      sc.epsilon = eps;
      sc.regime = ScalingRegime{q, q, classify_regime(q, q).kind};
      sc.nu0 = nu0;
      sc.nonlinear = false;
      sc.source = SourceSpec::zero(space);
      const KineticSolver solver(space, velocity, sc);

      DistributionField g = solver.zero_field();
      for (std::size_t k = 0; k < velocity.size(); ++k) {
        std::fill(g.node(k).begin(), g.node(k).end(), samples[k]);
      }
      DistributionField kernel_field = solver.zero_field();
      for (std::size_t k = 0; k < velocity.size(); ++k) {
        std::fill(kernel_field.node(k).begin(), kernel_field.node(k).end(), kernel[k]);
      }
      auto distance = [&](const DistributionField& a, const DistributionField& b) {
        DistributionField d = a;
        auto dv = d.values();
        auto bv = b.values();
        for (std::size_t i = 0; i < dv.size(); ++i) dv[i] -= bv[i];
        return discrete_l2_norm(space, velocity, d);
      };
      const double initial_gap = distance(g, kernel_field);
      const double initial_norm = discrete_l2_norm(space, velocity, g);

      RelaxCase rc;
      rc.epsilon = eps;
      rc.q = q;
      rc.lambda = solver.relaxation_number();
      rc.steps = static_cast<long>(std::ceil(decades * std::log(10.0) / rc.lambda));
      for (long n = 1; n <= rc.steps; ++n) {
        solver.step(g);
        const double expected = std::exp(-static_cast<double>(n) * rc.lambda);
        rc.max_deviation = std::max(rc.max_deviation, std::abs(distance(g, kernel_field) / initial_gap - expected));
        for (std::size_t x = 0; x < space.points(); x += space.points() / 4) {
          std::vector<double> column(velocity.size());
          for (std::size_t k = 0; k < velocity.size(); ++k) column[k] = g.at(x, k);
          const std::vector<double> pc = velocity.project(column);
          for (std::size_t k = 0; k < velocity.size(); ++k) {
            rc.kernel_drift = std::max(rc.kernel_drift, std::abs(pc[k] - kernel[k]) / initial_norm);
          }
        }
        rc.final_decay = expected;
      }
      report.cases.push_back(rc);
    }
  }
  return report;
}

std::string cmd_coefficients(const Rational& nu0) {
  const TransportCoefficients tc = transport_coefficients(solve_hats(BgkOperator(nu0)));
  return "kappa=" + to_string(tc.kappa) + " nu=" + to_string(tc.nu);
}

std::string cmd_report(std::span<const std::filesystem::path> paths) {
  std::vector<std::filesystem::path> found;
  for (const auto& path : paths) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) {
      found.push_back(path);
    } else if (std::filesystem::is_directory(path, ec)) {
      std::vector<std::filesystem::path> local;
      if (std::filesystem::is_regular_file(path / "report.json")) local.push_back(path / "report.json");
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_directory() && std::filesystem::is_regular_file(entry.path() / "report.json")) {
          local.push_back(entry.path() / "report.json");
        }
      }
      std::sort(local.begin(), local.end());
      found.insert(found.end(), local.begin(), local.end());
    } else {
      throw std::runtime_error(path.string() + ": no such file or directory");
    }
  }
  if (found.empty()) throw EmptyInput("report: no report.json found under the given paths");

  json merged = {{"schema_version", kSweepSchemaVersion}, {"reports", json::array()}};
  for (const auto& file : found) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error(file.string() + ": cannot open for reading");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw std::runtime_error(file.string() + ": " + e.what());
    }
    merged["reports"].push_back({{"source", file.string()}, {"report", std::move(doc)}});
  }
  return merged.dump(2);
}

}  // namespace kinlim
