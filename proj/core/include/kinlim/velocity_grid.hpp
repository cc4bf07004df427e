#pragma once

#include <array>
#include <span>
#include <vector>

#include "kinlim/velocity_polynomial.hpp"

namespace kinlim {

// Tensor Gauss-Hermite grid for the standard Maxwellian. Node k = (a N + b) N + c
// sits at (x_a, x_b, x_c); weights absorb M so that sum_k w_k phi(v_k)
// approximates <phi, 1>_M and sum_k w_k = 1.
class VelocityGrid {
 public:
  int nodes_per_axis() const { return n_; }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> abscissae() const { return abscissae_; }
  std::span<const double> axis_weights() const { return axis_weights_; }
  const std::array<double, 3>& node(std::size_t k) const { return nodes_[k]; }
  std::span<const std::array<double, 3>> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  // Largest |v_i| over nodes and axes.
  double max_speed() const { return abscissae_.back(); }

  // Samples p at every node.
  std::vector<double> sample(const VelocityPolynomial& p) const;
  // <p, q>_h = sum_k w_k p_k q_k
  double inner(std::span<const double> p, std::span<const double> q) const;
  double inner(const VelocityPolynomial& p, const VelocityPolynomial& q) const;

  // Orthogonal projection of one velocity vector onto span{1, v, |v|^2} in
  // <., .>_h. Idempotent to round-off.
  std::vector<double> project(std::span<const double> values) const;

  // Discrete collision-invariant basis values phi_m(v_k), m = 0..4, and the
  // matrix G^{-1} Phi^T W used to get projection coefficients.
  std::span<const double> invariant_values(int m) const { return invariants_[m]; }
  std::span<const double> coefficient_row(int m) const { return coefficient_rows_[m]; }

 private:
  friend VelocityGrid build_velocity_grid(int nodes_per_axis);

  int n_ = 0;
  std::vector<double> abscissae_;
  std::vector<double> axis_weights_;
  std::vector<std::array<double, 3>> nodes_;
  std::vector<double> weights_;
  std::array<std::vector<double>, 5> invariants_;
  std::array<std::vector<double>, 5> coefficient_rows_;
};

// N >= 4 and even. Throws std::invalid_argument on bad N and
// QuadratureDegeneracy if the Newton iteration stalls or the rule fails the
// exactness check against gaussian_moment for every monomial with per-axis
// degree <= 2N - 1.
VelocityGrid build_velocity_grid(int nodes_per_axis);

// One dimensional probabilists' Gauss-Hermite rule, weights summing to one.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite_rule(int n);

// Relative deviation used for quadrature checks: |quad - exact| divided by
// max(|exact|, sum_k w_k |phi(v_k)|).
double quadrature_monomial_error(const VelocityGrid& grid, Exponent exponent);

}  // namespace kinlim
