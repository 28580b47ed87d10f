#include "vertiport/rational.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vertiport {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer_literal(num)) {
    throw std::invalid_argument("not a rational: \"" + std::string(text) + "\"");
  }
  BigInt n(std::string(num[0] == '+' ? num.substr(1) : num));
  BigInt d = 1;
  if (slash != std::string_view::npos) {
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
      throw std::invalid_argument("not a rational: \"" + std::string(text) + "\"");
    }
    d = BigInt(std::string(den));
    if (d == 0) throw std::invalid_argument("zero denominator: \"" + std::string(text) + "\"");
  }
  return Rational(n, d);
}

std::string to_string(const Rational& value) {
  const BigInt n = boost::multiprecision::numerator(value);
  const BigInt d = boost::multiprecision::denominator(value);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

std::string to_decimal(const Rational& value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << to_double(value);
  return out.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace vertiport
