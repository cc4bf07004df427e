#include "kinlim/velocity_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <sstream>

namespace kinlim {

VelocityPolynomial::VelocityPolynomial(const Rational& constant) {
  accumulate(Exponent{}, constant);
}

VelocityPolynomial::VelocityPolynomial(long constant) : VelocityPolynomial(Rational(constant)) {}

VelocityPolynomial VelocityPolynomial::monomial(Exponent exponent, const Rational& coefficient) {
  VelocityPolynomial p;
  p.accumulate(exponent, coefficient);
  return p;
}

VelocityPolynomial VelocityPolynomial::velocity(Axis axis) {
  Exponent e;
  switch (axis) {
    case Axis::v1: e.a = 1; break;
    case Axis::v2: e.b = 1; break;
    case Axis::v3: e.c = 1; break;
  }
  return monomial(e);
}

VelocityPolynomial VelocityPolynomial::speed_squared() {
  return monomial({2, 0, 0}) + monomial({0, 2, 0}) + monomial({0, 0, 2});
}

Rational VelocityPolynomial::coefficient(Exponent exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

int VelocityPolynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total());
  return d;
}

double VelocityPolynomial::evaluate(const std::array<double, 3>& v) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    sum += c.get_d() * std::pow(v[0], e.a) * std::pow(v[1], e.b) * std::pow(v[2], e.c);
  }
  return sum;
}

void VelocityPolynomial::accumulate(Exponent exponent, const Rational& coefficient) {
  if (exponent.a < 0 || exponent.b < 0 || exponent.c < 0) {
    throw std::invalid_argument("VelocityPolynomial: negative exponent");
  }
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

VelocityPolynomial& VelocityPolynomial::operator+=(const VelocityPolynomial& other) {
  for (const auto& [e, c] : other.terms_) accumulate(e, c);
  return *this;
}

VelocityPolynomial& VelocityPolynomial::operator-=(const VelocityPolynomial& other) {
  for (const auto& [e, c] : other.terms_) accumulate(e, -c);
  return *this;
}

VelocityPolynomial& VelocityPolynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scale;
  return *this;
}

VelocityPolynomial VelocityPolynomial::operator-() const {
  VelocityPolynomial p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

VelocityPolynomial operator*(const VelocityPolynomial& lhs, const VelocityPolynomial& rhs) {
  VelocityPolynomial product;
  for (const auto& [el, cl] : lhs.terms_) {
    for (const auto& [er, cr] : rhs.terms_) {
      product.accumulate(el + er, cl * cr);
    }
  }
  return product;
}

std::string VelocityPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Reverse exponent order puts v1 powers first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = magnitude == 1;
    if (!unit || e.total() == 0) out << kinlim::to_string(magnitude);
    bool need_star = !unit;
    const int exps[3] = {e.a, e.b, e.c};
    for (int axis = 0; axis < 3; ++axis) {
      if (exps[axis] == 0) continue;
      if (need_star) out << "*";
      out << "v" << (axis + 1);
      if (exps[axis] > 1) out << "^" << exps[axis];
      need_star = true;
    }
  }
  return out.str();
}

}  // namespace kinlim
