#include "fpp/rational.hpp"

#include "fpp/errors.hpp"

#include <cmath>

namespace fpp {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw SchemaError("exact_rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an exact integer.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational r{BigInt(scaled)};
  const int shift = exponent - 53;
  if (shift >= 0) {
    r *= Rational{BigInt(1) << shift};
  } else {
    r /= Rational{BigInt(1) << (-shift)};
  }
  return r;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw SchemaError("parse_rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw SchemaError("parse_rational: zero denominator");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const auto decimals = text.size() - dot - 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < decimals; ++i) den *= 10;
  if (digits.empty() || digits == "-") digits += "0";
  return Rational(BigInt(digits), den);
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace fpp
