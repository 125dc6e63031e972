#pragma once

#include <cstdio>
#include <string>

#include "qstar/polynomial.hpp"

namespace qstar {

namespace detail {

inline std::string double_to_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Renders one Gaussian rational as a juxtaposition-friendly scalar factor:
// "3/4", "3/4 i", or a parenthesized sum for mixed values.  The sign of
// single-part values is extracted into `neg` so the polynomial printer can
// fold it into the +/- separators.
inline std::string render_gauss_factor(const GaussianRational& g, bool& neg) {
  neg = false;
  if (g.im == 0) {
    neg = g.re < 0;
    return rat_to_string(neg ? BigRat(-g.re) : g.re);
  }
  if (g.re == 0) {
    neg = g.im < 0;
    BigRat a = neg ? BigRat(-g.im) : g.im;
    return a == 1 ? "i" : rat_to_string(a) + " i";
  }
  return "(" + gauss_to_string(g) + ")";
}

struct RenderedScalar {
  bool neg = false;
  std::string text;  // "1" for a unit coefficient
};

// Canonical exact-coefficient rendering.  Recognizes +-q^k, +-q^k r,
// +-q^k rinv (and qbar powers for complex q) so identities print in the
// shape they are usually stated; everything else falls back to explicit
// rational components.  Deterministic: first match in a fixed scan order.
inline RenderedScalar render_scalar(const ExactField& f, const ExactScalar& c) {
  const bool radical = f.ctx->radical_ok();
  const bool q_zero = f.ctx->q().is_zero();
  const bool q_complex = !f.ctx->q().is_real();
  ExactScalar p = f.one();
  ExactScalar pb = f.one();
  ExactScalar r = radical ? f.r() : f.zero();
  ExactScalar ri = radical ? f.rinv() : f.zero();
  auto qpow = [](const std::string& base, int k) {
    if (k == 0) return std::string("1");
    if (k == 1) return base;
    return base + "^" + std::to_string(k);
  };
  auto with_r = [&qpow](const std::string& base, int k, const char* rad) {
    if (k == 0) return std::string(rad);
    return qpow(base, k) + " " + rad;
  };
  for (int k = 0; k <= 64; ++k) {
    if (c == p) return {false, qpow("q", k)};
    if (c == -p) return {true, qpow("q", k)};
    if (q_complex) {
      if (c == pb) return {false, qpow("qbar", k)};
      if (c == -pb) return {true, qpow("qbar", k)};
    }
    if (radical) {
      if (c == p * r) return {false, with_r("q", k, "r")};
      if (c == -(p * r)) return {true, with_r("q", k, "r")};
      if (c == p * ri) return {false, with_r("q", k, "rinv")};
      if (c == -(p * ri)) return {true, with_r("q", k, "rinv")};
    }
    if (q_zero) break;
    p = p * f.q();
    if (q_complex) pb = pb * f.qbar();
  }
  if (c.b().is_zero()) {
    bool neg = false;
    std::string t = render_gauss_factor(c.a(), neg);
    return {neg, t};
  }
  if (c.a().is_zero()) {
    bool neg = false;
    std::string t = render_gauss_factor(c.b(), neg);
    if (t == "1") return {neg, "r"};
    return {neg, t + " r"};
  }
  // general a + b r: parenthesized explicit sum
  std::string out = "(" + gauss_to_string(c.a());
  bool bneg = false;
  std::string bt = render_gauss_factor(c.b(), bneg);
  out += bneg ? " - " : " + ";
  out += (bt == "1") ? "r" : bt + " r";
  out += ")";
  return {false, out};
}

inline RenderedScalar render_scalar(const FloatField&, const FloatScalar& c) {
  std::complex<double> v = c.value();
  if (v.imag() == 0.0) {
    bool neg = std::signbit(v.real());
    return {neg, double_to_string(neg ? -v.real() : v.real())};
  }
  if (v.real() == 0.0) {
    bool neg = std::signbit(v.imag());
    return {neg, double_to_string(neg ? -v.imag() : v.imag()) + " i"};
  }
  std::string out = "(" + double_to_string(v.real());
  out += std::signbit(v.imag()) ? " - " : " + ";
  out += double_to_string(std::abs(v.imag())) + " i)";
  return {false, out};
}

inline std::string render_word(const Word& w, const Alphabet& alphabet) {
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w.letters[j] == w.letters[i]) ++j;
    if (!out.empty()) out += " ";
    out += alphabet.name(w.letters[i].gen);
    if (w.letters[i].star) out += "*";
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

}  // namespace detail

// Canonical printer.  Output re-parses to the same polynomial and printing
// is idempotent, which is what makes printed forms usable as test oracles.
template <class F>
std::string to_string(const StarPolynomial<F>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    detail::RenderedScalar rs = detail::render_scalar(p.field(), c);
    std::string body;
    if (w.empty()) {
      body = rs.text;
    } else if (rs.text == "1") {
      body = detail::render_word(w, *p.alphabet());
    } else {
      body = rs.text + " " + detail::render_word(w, *p.alphabet());
    }
    if (first) {
      out += rs.neg ? "-" : "";
      out += body;
      first = false;
    } else {
      out += rs.neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

}  // namespace qstar
