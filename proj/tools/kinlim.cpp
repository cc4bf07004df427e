#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinlim/errors.hpp"
#include "kinlim/harness.hpp"

namespace {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadInput = 2, kNoSolution = 3 };

void print_sweep(const kinlim::SweepReport& report, std::ostream& out) {
  out << "regime " << kinlim::to_string(report.regime.kind) << " (r=" << report.regime.r << ", q=" << report.regime.q
      << "), target " << kinlim::to_string(report.target) << ", kappa=" << kinlim::to_string(report.kappa)
      << " nu=" << kinlim::to_string(report.nu) << '\n';
  out << "epsilon      u_error      theta_error  grad(rho+theta)  div_u        euler_u      euler_theta  steps\n";
  for (const auto& row : report.rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-12.4g %-12.4e %-12.4e %-16.4e %-12.4e %-12.4e %-12.4e %ld\n", row.epsilon,
                  row.u_error, row.theta_error, row.boussinesq_residual, row.div_u_residual,
                  row.euler_momentum_residual, row.euler_heat_residual, row.steps);
    out << line;
  }
  out << "fitted order of " << report.fitted_metric << ": " << report.fitted_order << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary hydrodynamic limits of a BGK kinetic model on the 2D torus"};
  app.set_config("--config", "", "Read options from an INI-style key = value file");
  app.fallthrough();
  app.require_subcommand(1);

  kinlim::ExperimentConfig cfg;
  std::string nu0_text = "1";
  std::string output_dir = cfg.output_dir.string();
  app.add_option("--r", cfg.r, "Exponent r of the quadratic term")->capture_default_str();
  app.add_option("--q", cfg.q, "Knudsen exponent q")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon_ladder, "Strictly decreasing epsilon ladder")->capture_default_str();
  app.add_option("--modes", cfg.modes, "Fourier modes per spatial axis")->capture_default_str();
  app.add_option("--nodes", cfg.nodes_per_axis, "Gauss-Hermite nodes per velocity axis")->capture_default_str();
  app.add_option("--nu0", nu0_text, "BGK collision frequency (integer, p/q or decimal)")->capture_default_str();
  app.add_option("--amplitude", cfg.amplitude, "Forcing amplitude a")->capture_default_str();
  app.add_option("--forcing-mode", cfg.forcing_mode, "Wavenumber of the forcing mode")->capture_default_str();
  app.add_option("--dt-safety", cfg.dt_safety, "Time step safety factor in (0, 1]")->capture_default_str();
  app.add_option("--steady-tol", cfg.steady_tol, "Steady-state tolerance")->capture_default_str();
  app.add_option("--max-steps", cfg.max_steps, "Step limit per epsilon")->capture_default_str();
  app.add_option("--fluid-tol", cfg.fluid_tol, "Picard tolerance of the fluid reference")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  app.add_option("--output", output_dir, "Output directory")->capture_default_str();
  app.add_flag("--snapshots", cfg.snapshots, "Write checkpoints and moment fields per epsilon");

  auto* verify = app.add_subcommand("verify-algebra", "Exact rational checks of the collision algebra");
  kinlim::AlgebraOptions algebra;
  verify->add_option("--seed", algebra.seed, "Seed of the random polynomial generator")->capture_default_str();
  verify->add_option("--pairs", algebra.random_pairs, "Number of random polynomial pairs")->capture_default_str();
  verify->add_flag("--corrupt-b-hat", algebra.corrupt_b_hat, "Negative control: perturb B^_12")
      ->group("");

  auto* coefficients = app.add_subcommand("coefficients", "Print kappa and nu for the given nu0");

  auto* relax = app.add_subcommand("relax-test", "Homogeneous relaxation against the closed form");
  std::vector<double> relax_eps{0.2, 0.05};
  std::vector<double> relax_q{0.5, 2.0};
  double relax_decades = 3.0;
  relax->add_option("--epsilon", relax_eps, "Epsilon values")->capture_default_str();
  relax->add_option("--q", relax_q, "Knudsen exponents")->capture_default_str();
  relax->add_option("--decades", relax_decades, "Decades of decay to follow")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Epsilon sweep against the regime's fluid reference");

  auto* report = app.add_subcommand("report", "Merge sweep report.json files");
  std::vector<std::filesystem::path> report_paths;
  std::string report_output;
  report->add_option("paths", report_paths, "Sweep output directories or report.json files")->required();
  report->add_option("-o,--out", report_output, "Write merged JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  try {
    const kinlim::Rational nu0 = kinlim::parse_rational(nu0_text);
    if (nu0 <= 0) throw std::invalid_argument("nu0 must be positive");
    cfg.nu0 = kinlim::to_double(nu0);
    cfg.output_dir = output_dir;
    algebra.nu0 = nu0;

    if (*verify) {
      const auto result = kinlim::cmd_verify_algebra(algebra);
      kinlim::print_algebra_report(result, std::cout);
      return result.all_passed() ? kOk : kCheckFailed;
    }
    if (*coefficients) {
      std::cout << kinlim::cmd_coefficients(nu0) << '\n';
      return kOk;
    }
    if (*relax) {
      const auto result = kinlim::cmd_relax_test(relax_eps, relax_q, cfg.nu0, 8, cfg.nodes_per_axis, relax_decades);
      for (const auto& c : result.cases) {
        std::cout << "epsilon=" << c.epsilon << " q=" << c.q << " lambda=" << c.lambda << " steps=" << c.steps
                  << " final_factor=" << c.final_decay << " max_deviation=" << c.max_deviation
                  << " kernel_drift=" << c.kernel_drift << '\n';
      }
      std::cout << (result.passed() ? "PASS" : "FAIL") << " relaxation follows exp(-nu0 t / eps^(1+q)) within "
                << result.tolerance << '\n';
      return result.passed() ? kOk : kCheckFailed;
    }
    if (*sweep) {
      const auto result = kinlim::cmd_sweep(cfg);
      kinlim::write_sweep_outputs(result);
      print_sweep(result, std::cout);
      std::cout << "wrote " << (cfg.output_dir / "report.csv").string() << " and "
                << (cfg.output_dir / "report.json").string() << '\n';
      return kOk;
    }
    if (*report) {
      const std::string merged = kinlim::cmd_report(report_paths);
      if (report_output.empty()) {
        std::cout << merged << '\n';
      } else {
        std::ofstream out(report_output, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(report_output + ": cannot open for writing");
        out << merged << '\n';
      }
      return kOk;
    }
  } catch (const kinlim::NotConverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoSolution;
  } catch (const kinlim::NoContraction& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoSolution;
  } catch (const kinlim::EmptyInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
