#include <algorithm>
#include <ostream>
#include <random>
#include <sstream>

#include "kinlim/harness.hpp"
#include "kinlim/moment_algebra.hpp"

namespace kinlim {
namespace {

using Poly = VelocityPolynomial;

class PolynomialSource {
 public:
  PolynomialSource(std::uint64_t seed, int max_degree) : rng_(seed), max_degree_(max_degree) {}

  Rational rational() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 6);
    return make_rational(num(rng_), den(rng_));
  }

  Poly polynomial() {
    std::uniform_int_distribution<int> terms(1, 6);
    std::uniform_int_distribution<int> total(0, max_degree_);
    Poly p;
    for (int t = terms(rng_); t > 0; --t) {
      const int d = total(rng_);
      const int a = std::uniform_int_distribution<int>(0, d)(rng_);
      const int b = std::uniform_int_distribution<int>(0, d - a)(rng_);
      p += Poly::monomial({a, b, d - a - b}, rational());
    }
    return p;
  }

  // rho + u . v + e |v|^2, an element of Ker L.
  Poly kernel_element() {
    Poly p(rational());
    for (Axis i : kAxes) p += Poly::velocity(i) * rational();
    return p + Poly::speed_squared() * rational();
  }

 private:
  std::mt19937_64 rng_;
  int max_degree_;
};

std::string describe(const Rational& value) { return to_string(value); }

}  // namespace

bool AlgebraReport::all_passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const AlgebraCheck& c) { return c.passed; });
}

AlgebraReport cmd_verify_algebra(const AlgebraOptions& options) {
  AlgebraReport report;
  const BgkOperator op(options.nu0);
  PolynomialSource source(options.seed, options.max_degree);
  const auto invariants = collision_invariants();
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  {
    bool ok = true;
    for (const auto& k : invariants) ok = ok && op.apply(k) == Poly() && project_collision_invariants(k) == k;
    add("collision invariants lie in Ker L", ok, "L k = 0 and P k = k for 1, v1, v2, v3, |v|^2");
  }

  std::vector<std::pair<Poly, Poly>> pairs;
  for (int n = 0; n < options.random_pairs; ++n) {
    Poly p = source.polynomial();
    Poly q = source.polynomial();
    pairs.emplace_back(std::move(p), std::move(q));
  }
  const std::string sample_note = std::to_string(options.random_pairs) + " seeded pairs, degree <= " +
                                  std::to_string(options.max_degree) + ", seed " + std::to_string(options.seed);

  {
    bool ok = true;
    for (const auto& [p, q] : pairs) {
      const Poly pp = project_collision_invariants(p);
      ok = ok && project_collision_invariants(pp) == pp;
      for (const auto& k : invariants) ok = ok && inner_product(p - pp, k) == 0;
    }
    add("kernel orthogonality <(I - P) p, k> = 0, P^2 = P", ok, sample_note);
  }
  {
    bool ok = true;
    for (const auto& [p, q] : pairs) {
      const Poly lp = op.apply(p);
      for (const auto& k : invariants) ok = ok && inner_product(lp, k) == 0;
    }
    add("<L g, k> = 0 for every collision invariant k", ok, sample_note);
  }
  {
    bool ok = true;
    for (const auto& [p, q] : pairs) ok = ok && inner_product(op.apply(p), q) == inner_product(p, op.apply(q));
    add("self-adjointness <L p, q> = <p, L q>", ok, sample_note);
  }
  {
    bool ok = true;
    for (const auto& [p, q] : pairs) {
      const Rational form = inner_product(op.apply(p), p);
      const bool in_kernel = project_collision_invariants(p) == p;
      ok = ok && form >= 0 && ((form == 0) == in_kernel);
    }
    add("non-negativity <L p, p> >= 0 with equality exactly on Ker L", ok, sample_note);
  }
  {
    bool ok = true;
    for (int n = 0; n < 32; ++n) {
      const Poly g = source.kernel_element();
      ok = ok && op.gamma(g, g) == op.apply(g * g) * make_rational(1, 2);
    }
    add("Gamma(g, g) = L(g^2) / 2 for g in Ker L", ok, "32 seeded kernel elements");
  }

  HatSolution hats = solve_hats(op);
  if (options.corrupt_b_hat) {
    hats.b_hat[0][1] += Poly::velocity(Axis::v1) * Poly::velocity(Axis::v2) * make_rational(1, 7);
    hats.b_hat[1][0] = hats.b_hat[0][1];
  }
  {
    bool ok = true;
    for (Axis i : kAxes) {
      const Poly& a = hats.a_hat[index(i)];
      ok = ok && op.apply(a) == make_A(i) && project_collision_invariants(a) == Poly();
      for (Axis j : kAxes) {
        const Poly& b = hats.b_hat[index(i)][index(j)];
        ok = ok && op.apply(b) == make_B(i, j) && project_collision_invariants(b) == Poly();
      }
    }
    add("L A^_i = A_i, L B^_ij = B_ij with A^, B^ in Ker(L)-perp", ok,
        "alpha = " + describe(hats.alpha) + ", beta = " + describe(hats.beta));
  }

  report.kappa = make_rational(2, 5) * inner_product(hats.a_hat[0], make_A(Axis::v1));
  report.nu = make_rational(3, 4) * inner_product(hats.b_hat[0][0], make_B(Axis::v1, Axis::v1));
  {
    int mismatches = 0;
    for (Axis i : kAxes) {
      for (Axis j : kAxes) {
        const Rational expected = i == j ? make_rational(5, 2) * report.kappa : Rational(0);
        if (inner_product(hats.a_hat[index(i)], make_A(j)) != expected) ++mismatches;
      }
    }
    add("<A^_i, A_j> = (5/2) kappa delta_ij", mismatches == 0,
        "9 entries, " + std::to_string(mismatches) + " mismatched");
  }
  {
    std::string detail = "81 entries";
    bool ok = true;
    try {
      const TransportCoefficients tc = transport_coefficients(hats);
      ok = tc.kappa == report.kappa && tc.nu == report.nu;
    } catch (const TensorMismatch& e) {
      ok = false;
      detail = std::string("TensorMismatch: ") + e.what();
    }
    add("<B^_ij, B_kl> = nu (d_ik d_jl + d_il d_jk - (2/3) d_ij d_kl)", ok, detail);
  }
  {
    const Rational expected = 1 / options.nu0;
    const bool ok = report.kappa == expected && report.nu == expected;
    add("kappa = nu = 1/nu0", ok, "kappa = " + describe(report.kappa) + ", nu = " + describe(report.nu));
  }
  {
    bool ok = true;
    std::string detail;
    for (int n = 0; n < 16; ++n) {
      const Rational rho = source.rational();
      const std::array<Rational, 3> u{source.rational(), source.rational(), source.rational()};
      const Rational theta = source.rational();
      const MomentChainReplay replay = replay_moment_chain(op, rho, u, theta);
      ok = ok && replay.matches();
      if (n == 0) {
        detail = "u = (" + describe(u[0]) + ", " + describe(u[1]) + ", " + describe(u[2]) + "), theta = " +
                 describe(theta) + ": (1/2)<g^2, B_12> = " + describe(replay.stress[0][1]) +
                 ", <g^2, B_12> = " + describe(replay.full_square_stress[0][1]) +
                 ", (1/2)<g^2, A_1> = " + describe(replay.heat_flux[0]) +
                 ", <g^2, A_1> = " + describe(replay.full_square_heat_flux[0]);
      }
    }
    add("moment chain: <Gamma(g,g), B^_ij> = (1/2)<g^2, B_ij> = u_i u_j - |u|^2 d_ij / 3, "
        "<Gamma(g,g), A^_i> = (1/2)<g^2, A_i> = (5/2) u_i theta",
        ok, "16 seeded (rho, u, theta); " + detail);
  }

  // Radial formulas with constant radial factors, in units of
  // (1/sqrt(2 pi)) int_0^inf r^(2n) e^(-r^2/2) dr.
  const Rational r4 = radial_moment(2);
  const Rational r6 = radial_moment(3);
  const Rational r8 = radial_moment(4);
  const Rational quartic = r8 - 10 * r6 + 25 * r4;  // (r^2 - 5)^2 r^4
  report.radial_kappa_stated = make_rational(2, 15) * hats.alpha * r6;
  report.radial_nu_stated = make_rational(1, 6) * hats.beta * quartic;
  report.radial_kappa_corrected = make_rational(1, 15) * hats.alpha * quartic;
  report.radial_nu_corrected = make_rational(2, 15) * hats.beta * r6;
  std::ostringstream verdict;
  verdict << "kappa = (2/15) alpha <r^6>, nu = (1/6) beta <(r^2-5)^2 r^4> give kappa = "
          << describe(report.radial_kappa_stated) << ", nu = " << describe(report.radial_nu_stated)
          << " against kappa = " << describe(report.kappa) << ", nu = " << describe(report.nu)
          << " from the inner products";
  const bool stated_ok = report.radial_kappa_stated == report.kappa && report.radial_nu_stated == report.nu;
  const bool corrected_ok =
      report.radial_kappa_corrected == report.kappa && report.radial_nu_corrected == report.nu;
  if (stated_ok) {
    verdict << " (agree)";
  } else {
    verdict << " (disagree); kappa = (1/15) alpha <(r^2-5)^2 r^4>, nu = (2/15) beta <r^6> give kappa = "
            << describe(report.radial_kappa_corrected) << ", nu = " << describe(report.radial_nu_corrected)
            << (corrected_ok ? " (agree)" : " (disagree)");
  }
  report.radial_verdict = verdict.str();
  return report;
}

void print_algebra_report(const AlgebraReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) out << "  [" << c.detail << ']';
    out << '\n';
  }
  out << "kappa=" << to_string(report.kappa) << " nu=" << to_string(report.nu) << '\n';
  out << "NOTE  radial formulas: " << report.radial_verdict << '\n';
  out << (report.all_passed() ? "all identities hold" : "some identities FAILED") << '\n';
}

}  // namespace kinlim
