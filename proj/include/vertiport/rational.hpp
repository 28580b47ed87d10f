#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace vertiport {

// Expression templates are off so that `auto` never captures a proxy.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

// Accepts "n", "-n", "n/d" with d != 0. Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Canonical exact form: "n" when the denominator is 1, else reduced "n/d".
std::string to_string(const Rational& value);

// Fixed 6-decimal rendering for human-facing output only.
std::string to_decimal(const Rational& value, int digits = 6);

double to_double(const Rational& value);

}  // namespace vertiport
