#include "kinlim/rational.hpp"

#include <stdexcept>

namespace kinlim {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) {
    throw std::invalid_argument("make_rational: zero denominator");
  }
  Rational value(numerator, denominator);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) {
    return value.get_num().get_str();
  }
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  auto fail = [&] { return std::invalid_argument("parse_rational: cannot parse '" + s + "'"); };
  if (s.empty()) throw fail();
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const mpz_class num(s.substr(0, slash), 10);
      const mpz_class den(s.substr(slash + 1), 10);
      if (den == 0) throw fail();
      Rational value(num, den);
      value.canonicalize();
      return value;
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(mpz_class(s, 10));
    const std::string whole = s.substr(0, dot);
    const std::string fraction = s.substr(dot + 1);
    if (fraction.empty() || fraction.find_first_not_of("0123456789") != std::string::npos) throw fail();
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string digits = whole == "-" || whole == "+" || whole.empty() ? "0" : whole;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fraction.size());
    Rational value(mpz_class(digits, 10) * scale + (negative ? -1 : 1) * mpz_class(fraction, 10), scale);
    value.canonicalize();
    return value;
  } catch (const std::invalid_argument&) {
    throw fail();
  }
}

}  // namespace kinlim
