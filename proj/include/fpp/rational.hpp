#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fpp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (every finite double is dyadic).
Rational exact_rational(double x);

/// Parses "p/q", an integer, or a decimal literal such as "0.25" exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

}  // namespace fpp
