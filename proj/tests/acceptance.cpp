// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset; exit status is 1 if any selected one fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kinlim/errors.hpp"
#include "kinlim/harness.hpp"
#include "kinlim/kinetic_model.hpp"
#include "kinlim/kinetic_solver.hpp"
#include "kinlim/moment_algebra.hpp"
#include "kinlim/velocity_grid.hpp"

using namespace kinlim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " > " : "") + fmt(v[i]);
  return s;
}

template <typename Fn>
std::vector<double> column(const SweepReport& report, Fn fn) {
  std::vector<double> out;
  for (const auto& row : report.rows) out.push_back(fn(row));
  return out;
}

Outcome exact_algebra() {
  const auto start = std::chrono::steady_clock::now();
  const AlgebraReport report = cmd_verify_algebra();
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  int failed = 0;
  for (const auto& c : report.checks) failed += c.passed ? 0 : 1;
  detail << report.checks.size() - failed << "/" << report.checks.size() << " identities, " << elapsed << " s";
  return {report.all_passed() && elapsed < 10.0, detail.str()};
}

Outcome transport_coefficients_exact() {
  const std::string one = cmd_coefficients(Rational(1));
  const std::string two = cmd_coefficients(Rational(2));
  const AlgebraReport report = cmd_verify_algebra(AlgebraOptions{.random_pairs = 8});
  std::cout << "  radial formulas: " << report.radial_verdict << '\n';
  return {one == "kappa=1 nu=1" && two == "kappa=1/2 nu=1/2", "nu0=1: " + one + "; nu0=2: " + two};
}

Outcome moment_chain() {
  const BgkOperator op;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  auto draw = [&] { return make_rational(num(rng), den(rng)); };
  int samples = 0;
  bool ok = true;
  bool literal_matches = true;
  for (int n = 0; n < 16; ++n, ++samples) {
    const Rational rho = draw();
    const std::array<Rational, 3> u{draw(), draw(), draw()};
    const Rational theta = draw();
    const MomentChainReplay replay = replay_moment_chain(op, rho, u, theta);
    ok = ok && replay.matches();
    for (int i = 0; i < 3; ++i) {
      literal_matches = literal_matches && replay.full_square_heat_flux[i] == replay.heat_flux_expected[i];
      for (int j = 0; j < 3; ++j) {
        literal_matches = literal_matches && replay.full_square_stress[i][j] == replay.stress_expected[i][j];
      }
    }
  }
  // One hand-checkable instance: u = (1, 0, 0), theta = 1.
  const MomentChainReplay unit = replay_moment_chain(op, 0, {1, 0, 0}, 1);
  std::cout << "  u=(1,0,0), theta=1: <g^2,B_11> = " << to_string(unit.full_square_stress[0][0])
            << ", <g^2,A_1> = " << to_string(unit.full_square_heat_flux[0])
            << "; <Gamma(g,g),B^_11> = " << to_string(unit.gamma_stress[0][0])
            << ", <Gamma(g,g),A^_1> = " << to_string(unit.gamma_heat_flux[0]) << '\n';
  std::string detail = std::to_string(samples) + " rational samples; (1/2)<g^2,.> and <Gamma(g,g),hat> exact";
  detail += literal_matches ? "; unhalved <g^2,.> also matches" : "; unhalved <g^2,.> is twice the closed form";
  return {ok, detail};
}

Outcome quadrature_fidelity() {
  const VelocityGrid grid = build_velocity_grid(8);
  double worst = 0.0;
  int count = 0;
  for (int a = 0; a <= 15; ++a) {
    for (int b = 0; a + b <= 15; ++b) {
      for (int c = 0; a + b + c <= 15; ++c) {
        worst = std::max(worst, quadrature_monomial_error(grid, Exponent{a, b, c}));
        ++count;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(count) + " monomials, worst relative error " + fmt(worst)};
}

Outcome homogeneous_relaxation() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> eps{0.2, 0.05};
  const std::vector<double> qs{0.5, 2.0};
  const RelaxReport report = cmd_relax_test(eps, qs, 1.0, 8, 8, 3.0);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  double drift = 0.0;
  for (const auto& c : report.cases) {
    worst = std::max(worst, c.max_deviation);
    drift = std::max(drift, c.kernel_drift);
  }
  return {report.passed() && elapsed < 60.0,
          "max deviation " + fmt(worst) + ", kernel drift " + fmt(drift) + ", " + fmt(elapsed) + " s"};
}

Outcome conservation() {
  const SpatialGrid space(32);
  const VelocityGrid velocity = build_velocity_grid(8);
  SolverConfig config;
  config.epsilon = 0.1;
  config.source = SourceSpec::zero(space);
  const KineticSolver solver(space, velocity, config);

  DistributionField g = solver.zero_field();
  const std::vector<double> ones(space.points(), 1.0);
  add_separable(g, velocity, ones,
                hydrodynamic_polynomial(make_rational(3, 100), {make_rational(1, 100), make_rational(-1, 50), make_rational(1, 200)},
                                        make_rational(1, 50)));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-0.005, 0.005);
  for (auto& v : g.values()) v += noise(rng);

  const auto before = solver.conserved_means(g);
  for (int n = 0; n < 10000; ++n) solver.step(g);
  const auto after = solver.conserved_means(g);
  double worst = 0.0;
  for (int m = 0; m < 5; ++m) {
    const double drift = std::abs(after[m] - before[m]) / std::abs(before[m]);
    worst = std::isfinite(drift) ? std::max(worst, drift) : drift;
    if (!std::isfinite(worst)) break;
  }
  return {g.all_finite() && worst <= 1e-12, "10000 steps, worst relative drift " + fmt(worst)};
}

ExperimentConfig sweep_config(double r, double q, const fs::path& dir) {
  ExperimentConfig c;
  c.r = r;
  c.q = q;
  c.output_dir = dir;
  return c;
}

void print_rows(const SweepReport& report) {
  for (const auto& row : report.rows) {
    std::cout << "  eps=" << row.epsilon << " steps=" << row.steps << " u_err=" << fmt(row.u_error)
              << " theta_err=" << fmt(row.theta_error) << " |grad(rho+theta)|=" << fmt(row.boussinesq_residual)
              << " |div u|=" << fmt(row.div_u_residual) << " euler=(" << fmt(row.euler_momentum_residual) << ", "
              << fmt(row.euler_heat_residual) << ") wall=" << fmt(row.wall_time) << " s\n";
  }
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Sweeps {
 public:
  explicit Sweeps(fs::path root) : root_(std::move(root)) {}

  const SweepReport& nsf() { return run(nsf_, 0.5, 0.5, "nsf"); }
  const SweepReport& stokes() { return run(stokes_, 2.0, 0.5, "stokes"); }
  const SweepReport& euler() { return run(euler_, 0.5, 2.0, "euler"); }
  const fs::path& root() const { return root_; }

 private:
  const SweepReport& run(std::optional<SweepReport>& slot, double r, double q, const std::string& name) {
    if (!slot) {
      const auto start = std::chrono::steady_clock::now();
      slot = cmd_sweep(sweep_config(r, q, root_ / name));
      write_sweep_outputs(*slot);
      std::cout << "  [" << name << " sweep, " << fmt(seconds_since(start)) << " s]\n";
      print_rows(*slot);
    }
    return *slot;
  }

  fs::path root_;
  std::optional<SweepReport> nsf_;
  std::optional<SweepReport> stokes_;
  std::optional<SweepReport> euler_;
};

Outcome boussinesq_emergence(Sweeps& sweeps) {
  const auto& report = sweeps.nsf();
  const auto bq = column(report, [](const SweepRow& r) { return r.boussinesq_residual; });
  const auto div = column(report, [](const SweepRow& r) { return r.div_u_residual; });
  return {strictly_decreasing(bq) && strictly_decreasing(div),
          "grad(rho+theta): " + join(bq) + "; div u: " + join(div)};
}

Outcome nsf_limit(Sweeps& sweeps) {
  const auto& report = sweeps.nsf();
  const auto u = column(report, [](const SweepRow& r) { return r.u_error; });
  const auto theta = column(report, [](const SweepRow& r) { return r.theta_error; });
  const bool ok = strictly_decreasing(u) && strictly_decreasing(theta) && u.back() <= 0.05 && theta.back() <= 0.05;
  return {ok, "u: " + join(u) + "; theta: " + join(theta) + "; fitted order " + fmt(report.fitted_order)};
}

Outcome regime_dispatch(Sweeps& sweeps) {
  const auto& stokes = sweeps.stokes();
  const auto u = column(stokes, [](const SweepRow& r) { return r.u_error; });
  const auto theta = column(stokes, [](const SweepRow& r) { return r.theta_error; });
  const auto& euler = sweeps.euler();
  const auto em = column(euler, [](const SweepRow& r) { return r.euler_momentum_residual; });
  const auto eh = column(euler, [](const SweepRow& r) { return r.euler_heat_residual; });
  const bool ok = stokes.target == ComparisonTarget::stokes && euler.target == ComparisonTarget::euler_residuals &&
                  strictly_decreasing(u) && strictly_decreasing(theta) && strictly_decreasing(em) &&
                  strictly_decreasing(eh);
  return {ok, "stokes u: " + join(u) + ", theta: " + join(theta) + "; euler momentum: " + join(em) +
                  ", heat: " + join(eh)};
}

Outcome determinism(Sweeps& sweeps) {
  sweeps.nsf();
  const auto start = std::chrono::steady_clock::now();
  const SweepReport again = cmd_sweep(sweep_config(0.5, 0.5, sweeps.root() / "nsf-rerun"));
  write_sweep_outputs(again);
  const std::string a = read_bytes(sweeps.root() / "nsf" / "report.csv");
  const std::string b = read_bytes(sweeps.root() / "nsf-rerun" / "report.csv");
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes compared, rerun " + fmt(seconds_since(start)) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  auto wanted = [&](int n) { return selected.empty() || selected.contains(n); };

  const fs::path root = fs::temp_directory_path() / "kinlim-acceptance";
  fs::remove_all(root);
  Sweeps sweeps(root);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact algebra suite", exact_algebra},
      {"transport coefficients", transport_coefficients_exact},
      {"moment-chain replay", moment_chain},
      {"quadrature fidelity (N=8, degree <= 15)", quadrature_fidelity},
      {"homogeneous relaxation", homogeneous_relaxation},
      {"conservation over 10^4 steps", conservation},
      {"Boussinesq and incompressibility emergence", [&] { return boussinesq_emergence(sweeps); }},
      {"NSF limit (monotone, <= 5% at smallest eps)", [&] { return nsf_limit(sweeps); }},
      {"regime dispatch (Stokes, Euler)", [&] { return regime_dispatch(sweeps); }},
      {"determinism of report.csv", [&] { return determinism(sweeps); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!wanted(number)) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    failures += outcome.passed ? 0 : 1;
    std::cout << "criterion " << number << ": " << (outcome.passed ? "PASS" : "FAIL") << "  " << criteria[i].first
              << " -- " << outcome.detail << std::endl;
  }
  fs::remove_all(root);
  return failures == 0 ? 0 : 1;
}
