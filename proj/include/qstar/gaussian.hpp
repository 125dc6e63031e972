#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "qstar/rational.hpp"

namespace qstar {

// Element of Q(i): re + im*i with exact rational parts.
struct GaussianRational {
  BigRat re{0};
  BigRat im{0};

  GaussianRational() = default;
  GaussianRational(BigRat r) : re(std::move(r)) {}
  GaussianRational(BigRat r, BigRat i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r) {}

  static GaussianRational unit_i() { return {BigRat(0), BigRat(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  friend GaussianRational operator+(const GaussianRational& x, const GaussianRational& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend GaussianRational operator-(const GaussianRational& x, const GaussianRational& y) {
    return {x.re - y.re, x.im - y.im};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  friend GaussianRational operator*(const GaussianRational& x, const GaussianRational& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  GaussianRational conj() const { return {re, -im}; }
  BigRat norm_sq() const { return re * re + im * im; }
  GaussianRational inv() const {
    BigRat n = norm_sq();
    if (n == 0) throw qstar_error("division by zero in Q(i)");
    return {re / n, -im / n};
  }
  friend GaussianRational operator/(const GaussianRational& x, const GaussianRational& y) {
    return x * y.inv();
  }
  friend bool operator==(const GaussianRational& x, const GaussianRational& y) {
    return x.re == y.re && x.im == y.im;
  }
  friend bool operator!=(const GaussianRational& x, const GaussianRational& y) {
    return !(x == y);
  }
  std::complex<double> to_complex() const {
    return {rat_to_double(re), rat_to_double(im)};
  }
};

// Principal square root in Q(i) when one exists.  Branch choice: re > 0, or
// re == 0 with im >= 0, so repeated calls are deterministic.
inline std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& x) {
  if (x.is_zero()) return GaussianRational{};
  if (x.im == 0) {
    if (x.re > 0) {
      auto s = rational_sqrt(x.re);
      if (s) return GaussianRational(*s);
      return std::nullopt;
    }
    auto s = rational_sqrt(-x.re);
    if (s) return GaussianRational(BigRat(0), *s);
    return std::nullopt;
  }
  // (p + t i)^2 = x forces p^2 = (re + |x|)/2 and t = im/(2p); both p^2 and
  // |x| must be rational squares for a root to exist in Q(i).
  auto h = rational_sqrt(x.norm_sq());
  if (!h) return std::nullopt;
  BigRat p2 = (x.re + *h) / 2;
  auto p = rational_sqrt(p2);
  if (!p || *p == 0) return std::nullopt;
  BigRat t = x.im / (2 * *p);
  return GaussianRational{*p, t};
}

// Renders "0", "p/q", "p/q i", or "p/q + p'/q' i" (with "- " for negative
// imaginary part).  Used by reports and scalar printing.
inline std::string gauss_to_string(const GaussianRational& g) {
  if (g.is_zero()) return "0";
  std::string out;
  if (g.re != 0) out += rat_to_string(g.re);
  if (g.im != 0) {
    if (g.re != 0) out += (g.im > 0) ? " + " : " - ";
    else if (g.im < 0) out += "-";
    BigRat a = g.im > 0 ? g.im : BigRat(-g.im);
    if (a != 1) out += rat_to_string(a) + " ";
    out += "i";
  }
  return out;
}

// Accepts "p/q", "3+4i", "-i", "(3+4i)/5", "0.9" (when allow_decimal), and
// the obvious sign/whitespace variations.  Whole string must be consumed.
inline GaussianRational gaussian_from_string(std::string_view s, bool allow_decimal) {
  std::size_t pos = 0;
  auto skip_ws = [&]() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  // one signed part: [+-] (i | num [i])
  auto parse_part = [&](BigRat& re, BigRat& im) {
    skip_ws();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      neg = s[pos] == '-';
      ++pos;
      skip_ws();
    }
    if (pos >= s.size()) throw parse_error("expected number", pos);
    BigRat v;
    bool imag = false;
    if (s[pos] == 'i') {
      ++pos;
      v = 1;
      imag = true;
    } else {
      v = parse_unsigned_rational(s, pos, allow_decimal);
      if (pos < s.size() && s[pos] == 'i') {
        ++pos;
        imag = true;
      }
    }
    if (neg) v = -v;
    if (imag) im += v;
    else re += v;
  };
  skip_ws();
  BigRat re{0}, im{0};
  bool parenthesized = false;
  if (pos < s.size() && s[pos] == '(') {
    parenthesized = true;
    ++pos;
  }
  parse_part(re, im);
  skip_ws();
  while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    parse_part(re, im);
    skip_ws();
  }
  if (parenthesized) {
    if (pos >= s.size() || s[pos] != ')') throw parse_error("expected ')'", pos);
    ++pos;
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      skip_ws();
      BigRat d = parse_unsigned_rational(s, pos, allow_decimal);
      if (d == 0) throw parse_error("zero denominator", pos);
      re /= d;
      im /= d;
    }
  }
  skip_ws();
  if (pos != s.size()) throw parse_error("trailing characters in number", pos);
  return {re, im};
}

}  // namespace qstar
