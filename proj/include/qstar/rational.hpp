#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "qstar/errors.hpp"

namespace qstar {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const BigRat& x) { return x.str(); }

// Convert through a 50-digit float so huge numerators/denominators cannot
// overflow an intermediate double division.
inline double rat_to_double(const BigRat& x) {
  using wide = boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(static_cast<wide>(x));
}

inline std::optional<BigInt> int_sqrt_exact(const BigInt& n) {
  if (n < 0) return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

// Nonnegative rational square root, when one exists.
inline std::optional<BigRat> rational_sqrt(const BigRat& x) {
  if (x < 0) return std::nullopt;
  auto n = int_sqrt_exact(numerator(x));
  if (!n) return std::nullopt;
  auto d = int_sqrt_exact(denominator(x));
  if (!d) return std::nullopt;
  return BigRat(*n, *d);
}

// cpp_int's string constructor treats a leading 0 as an octal prefix, so
// decimal digit strings go through this instead.
inline BigInt bigint_from_digits(std::string_view digits) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  return BigInt(std::string(digits.substr(i)));
}

// Parses an unsigned numeric literal starting at s[pos]:
//   digits                      integer
//   digits/digits               rational
//   digits.digits[e[+-]digits]  decimal (exact: 0.9 -> 9/10), only if allowed
//   digits e[+-]digits          decimal exponent form, only if allowed
// Advances pos past the literal.  Decimal forms are gated so exact sessions
// can insist on p/q input.
inline BigRat parse_unsigned_rational(std::string_view s, std::size_t& pos,
                                      bool allow_decimal) {
  std::size_t start = pos;
  auto digits = [&]() {
    std::size_t d0 = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == d0) throw parse_error("expected digits", d0);
    return std::string(s.substr(d0, pos - d0));
  };
  std::string ip = digits();
  std::string fp;
  bool is_decimal = false;
  long exp10 = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    is_decimal = true;
    fp = digits();
  }
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::size_t save = pos;
    ++pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      neg = s[pos] == '-';
      ++pos;
    }
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      is_decimal = true;
      exp10 = std::stol(digits());
      if (neg) exp10 = -exp10;
    } else {
      pos = save;  // the 'e' belongs to something else
    }
  }
  if (!is_decimal && pos < s.size() && s[pos] == '/') {
    ++pos;
    std::string den = digits();
    BigInt d = bigint_from_digits(den);
    if (d == 0) throw parse_error("zero denominator", start);
    return BigRat(bigint_from_digits(ip), d);
  }
  if (!is_decimal) return BigRat(bigint_from_digits(ip));
  if (!allow_decimal)
    throw parse_error("decimal literal not representable in Exact mode, use p/q", start);
  BigInt num = bigint_from_digits(ip + fp);
  long shift = exp10 - static_cast<long>(fp.size());
  BigRat v(num);
  BigInt p10 = boost::multiprecision::pow(BigInt(10),
                                          static_cast<unsigned>(shift < 0 ? -shift : shift));
  if (shift < 0) v /= BigRat(p10);
  else v *= BigRat(p10);
  return v;
}

}  // namespace qstar
