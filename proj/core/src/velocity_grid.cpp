#include "kinlim/velocity_grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "kinlim/errors.hpp"
#include "kinlim/moment_algebra.hpp"

namespace kinlim {
namespace {

// Orthonormal probabilists' Hermite values p_0..p_{n} at x (w.r.t. the
// standard normal density).
void orthonormal_hermite(int n, double x, std::vector<double>& p) {
  p.assign(n + 1, 0.0);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k) {
    p[k + 1] = (x * p[k] - std::sqrt(static_cast<double>(k)) * p[k - 1]) / std::sqrt(k + 1.0);
  }
}

}  // namespace

HermiteRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be positive");

  // Golub-Welsch for starting values.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success) throw QuadratureDegeneracy("gauss_hermite_rule: eigen solve failed");

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> p;
  for (int i = 0; i < n; ++i) {
    double x = eig.eigenvalues()(i);
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      orthonormal_hermite(n, x, p);
      const double derivative = std::sqrt(static_cast<double>(n)) * p[n - 1];
      if (derivative == 0.0 || !std::isfinite(derivative)) break;
      const double dx = p[n] / derivative;
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "gauss_hermite_rule: Newton iteration did not converge for node " << i << " of " << n;
      throw QuadratureDegeneracy(msg.str());
    }
    rule.nodes[i] = x;
  }
  // Exact mirror symmetry keeps odd moments at round-off.
  for (int i = 0; i < n / 2; ++i) {
    const double mag = 0.5 * (std::abs(rule.nodes[i]) + std::abs(rule.nodes[n - 1 - i]));
    rule.nodes[i] = -mag;
    rule.nodes[n - 1 - i] = mag;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;

  for (int i = 0; i < n; ++i) {
    orthonormal_hermite(n - 1, rule.nodes[i], p);
    double christoffel = 0.0;
    for (double value : p) christoffel += value * value;
    rule.weights[i] = 1.0 / christoffel;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  return rule;
}

std::vector<double> VelocityGrid::sample(const VelocityPolynomial& p) const {
  std::vector<double> values(size());
  for (std::size_t k = 0; k < size(); ++k) values[k] = p.evaluate(nodes_[k]);
  return values;
}

double VelocityGrid::inner(std::span<const double> p, std::span<const double> q) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < size(); ++k) sum += weights_[k] * p[k] * q[k];
  return sum;
}

double VelocityGrid::inner(const VelocityPolynomial& p, const VelocityPolynomial& q) const {
  return inner(sample(p), sample(q));
}

std::vector<double> VelocityGrid::project(std::span<const double> values) const {
  if (values.size() != size()) throw std::invalid_argument("VelocityGrid::project: size mismatch");
  std::array<double, 5> coeff{};
  for (int m = 0; m < 5; ++m) {
    double c = 0.0;
    for (std::size_t k = 0; k < size(); ++k) c += coefficient_rows_[m][k] * values[k];
    coeff[m] = c;
  }
  std::vector<double> out(size(), 0.0);
  for (int m = 0; m < 5; ++m) {
    for (std::size_t k = 0; k < size(); ++k) out[k] += coeff[m] * invariants_[m][k];
  }
  return out;
}

double quadrature_monomial_error(const VelocityGrid& grid, Exponent exponent) {
  double quad = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& v = grid.node(k);
    const double phi = std::pow(v[0], exponent.a) * std::pow(v[1], exponent.b) * std::pow(v[2], exponent.c);
    quad += grid.weights()[k] * phi;
    scale += grid.weights()[k] * std::abs(phi);
  }
  const double exact = to_double(gaussian_moment(exponent));
  return std::abs(quad - exact) / std::max(std::abs(exact), scale);
}

VelocityGrid build_velocity_grid(int nodes_per_axis) {
  if (nodes_per_axis < 4 || nodes_per_axis % 2 != 0) {
    throw std::invalid_argument("build_velocity_grid: nodes per axis must be even and >= 4");
  }
  const int n = nodes_per_axis;
  HermiteRule rule = gauss_hermite_rule(n);

  VelocityGrid grid;
  grid.n_ = n;
  grid.abscissae_ = rule.nodes;
  grid.axis_weights_ = rule.weights;
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  grid.nodes_.resize(total);
  grid.weights_.resize(total);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        const std::size_t k = (static_cast<std::size_t>(a) * n + b) * n + c;
        grid.nodes_[k] = {rule.nodes[a], rule.nodes[b], rule.nodes[c]};
        grid.weights_[k] = rule.weights[a] * rule.weights[b] * rule.weights[c];
      }
    }
  }

  // Exactness against the rational oracle, per-axis degree <= 2N - 1.
  constexpr double kExactnessTolerance = 1e-11;
  const int max_degree = 2 * n - 1;
  std::vector<std::vector<double>> powers(n, std::vector<double>(max_degree + 1, 1.0));
  for (int a = 0; a < n; ++a) {
    for (int d = 1; d <= max_degree; ++d) powers[a][d] = powers[a][d - 1] * rule.nodes[a];
  }
  for (int da = 0; da <= max_degree; ++da) {
    for (int db = 0; db <= max_degree; ++db) {
      for (int dc = 0; dc <= max_degree; ++dc) {
        double quad = 0.0;
        double scale = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const double ab = rule.weights[a] * rule.weights[b] * powers[a][da] * powers[b][db];
            for (int c = 0; c < n; ++c) {
              const double term = ab * rule.weights[c] * powers[c][dc];
              quad += term;
              scale += std::abs(term);
            }
          }
        }
        const double exact = to_double(gaussian_moment(da, db, dc));
        if (std::abs(quad - exact) > kExactnessTolerance * std::max(std::abs(exact), scale)) {
          std::ostringstream msg;
          msg << "build_velocity_grid: rule not exact for v1^" << da << " v2^" << db << " v3^" << dc
              << " (quadrature " << quad << ", exact " << exact << ")";
          throw QuadratureDegeneracy(msg.str());
        }
      }
    }
  }

  // Collision invariants and the Gram-matrix projection rows.
  for (int m = 0; m < 5; ++m) grid.invariants_[m].resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    const auto& v = grid.nodes_[k];
    grid.invariants_[0][k] = 1.0;
    grid.invariants_[1][k] = v[0];
    grid.invariants_[2][k] = v[1];
    grid.invariants_[3][k] = v[2];
    grid.invariants_[4][k] = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  }
  // Gram matrix, its inverse and the rows in long double.
  using Gram = Eigen::Matrix<long double, 5, 5>;
  Gram gram;
  for (int m = 0; m < 5; ++m) {
    for (int l = 0; l < 5; ++l) {
      long double sum = 0.0L;
      for (std::size_t k = 0; k < total; ++k) {
        sum += static_cast<long double>(grid.weights_[k]) * grid.invariants_[m][k] * grid.invariants_[l][k];
      }
      gram(m, l) = sum;
    }
  }
  const Gram gram_inverse = gram.ldlt().solve(Gram::Identity());
  for (int m = 0; m < 5; ++m) {
    grid.coefficient_rows_[m].assign(total, 0.0);
    for (std::size_t k = 0; k < total; ++k) {
      long double row = 0.0L;
      for (int l = 0; l < 5; ++l) row += gram_inverse(m, l) * grid.invariants_[l][k];
      grid.coefficient_rows_[m][k] = static_cast<double>(row * grid.weights_[k]);
    }
  }
  return grid;
}

}  // namespace kinlim
