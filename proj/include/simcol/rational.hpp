#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "simcol/errors.hpp"

namespace simcol {

/// Exact rational, always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw InvalidInput("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// Serialized as "num/den"; integers keep the "/1" so readers never special-case.
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Accepts "num/den", "num" or "-num/den" with optional surrounding blanks.
inline Rational parse_rational(std::string_view text, std::size_t line = 0) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  text = trim(text);
  auto slash = text.find('/');
  std::string_view num = trim(text.substr(0, slash));
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
  if (!is_int(num) || !is_int(den) || den.front() == '-')
    throw ParseError(line, "not a rational: '" + std::string(text) + "'");
  BigInt n(std::string(num.front() == '+' ? num.substr(1) : num));
  BigInt d(std::string(den.front() == '+' ? den.substr(1) : den));
  if (d == 0) throw ParseError(line, "zero denominator");
  return Rational(n, d);
}

}  // namespace simcol
