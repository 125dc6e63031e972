#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qstar/polynomial.hpp"

namespace qstar {

namespace detail {

struct Token {
  enum Kind { LPAREN, RPAREN, PLUS, MINUS, STAR, CARET, NUMBER, IDENT, END };
  Kind kind;
  std::size_t pos;
  BigRat num;
  std::string text;
};

inline std::vector<Token> lex(std::string_view s, bool allow_decimal) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t pos = i;
    switch (c) {
      case '(': out.push_back({Token::LPAREN, pos, {}, "("}); ++i; continue;
      case ')': out.push_back({Token::RPAREN, pos, {}, ")"}); ++i; continue;
      case '+': out.push_back({Token::PLUS, pos, {}, "+"}); ++i; continue;
      case '-': out.push_back({Token::MINUS, pos, {}, "-"}); ++i; continue;
      case '*': out.push_back({Token::STAR, pos, {}, "*"}); ++i; continue;
      case '^': out.push_back({Token::CARET, pos, {}, "^"}); ++i; continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigRat v = parse_unsigned_rational(s, i, allow_decimal);
      out.push_back({Token::NUMBER, pos, std::move(v), std::string(s.substr(pos, i - pos))});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::IDENT, pos, {}, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({Token::END, s.size(), {}, ""});
  return out;
}

// Grammar (multiplication is juxtaposition, '*' is the adjoint postfix):
//   expr   := ['-'|'+'] term (('+'|'-') term)*
//   term   := factor factor*
//   factor := atom ['*'] ['^' integer]
//   atom   := '(' expr ')' | number | ident
// where ident is a generator name or one of the scalar tokens
// q, qbar, r, rinv, i.
template <class F>
class ExprParser {
 public:
  ExprParser(F field, std::shared_ptr<const Alphabet> alphabet, std::string_view src)
      : field_(std::move(field)),
        alphabet_(std::move(alphabet)),
        toks_(lex(src, !F::exact)) {}

  StarPolynomial<F> parse() {
    if (peek().kind == Token::END) throw parse_error("empty expression", 0);
    auto p = parse_expr();
    if (peek().kind != Token::END)
      throw parse_error("unexpected token '" + peek().text + "'", peek().pos);
    return p;
  }

 private:
  using P = StarPolynomial<F>;

  const Token& peek() const { return toks_[idx_]; }
  const Token& advance() { return toks_[idx_++]; }

  P parse_expr() {
    bool neg = false;
    if (peek().kind == Token::MINUS) {
      neg = true;
      advance();
    } else if (peek().kind == Token::PLUS) {
      advance();
    }
    P p = parse_term();
    if (neg) p = -p;
    while (peek().kind == Token::PLUS || peek().kind == Token::MINUS) {
      bool minus = advance().kind == Token::MINUS;
      P t = parse_term();
      p = minus ? p - t : p + t;
    }
    return p;
  }

  static bool starts_factor(const Token& t) {
    return t.kind == Token::LPAREN || t.kind == Token::NUMBER || t.kind == Token::IDENT;
  }

  P parse_term() {
    P p = parse_factor();
    while (starts_factor(peek())) p = p * parse_factor();
    return p;
  }

  P parse_factor() {
    P p = parse_atom();
    if (peek().kind == Token::STAR) {
      advance();
      p = p.adjoint();
    }
    if (peek().kind == Token::CARET) {
      advance();
      if (peek().kind != Token::NUMBER)
        throw parse_error("expected integer exponent", peek().pos);
      const Token& t = advance();
      if (denominator(t.num) != 1 || t.num < 0 || t.num > 4096)
        throw parse_error("exponent must be an integer in [0, 4096]", t.pos);
      p = p.pow(numerator(t.num).convert_to<std::size_t>());
    }
    return p;
  }

  P parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::LPAREN: {
        advance();
        P p = parse_expr();
        if (peek().kind != Token::RPAREN)
          throw parse_error("expected ')'", peek().pos);
        advance();
        return p;
      }
      case Token::NUMBER: {
        advance();
        return P::scalar(field_, alphabet_, field_.from_rat(t.num));
      }
      case Token::IDENT: {
        advance();
        if (t.text == "q") return P::scalar(field_, alphabet_, field_.q());
        if (t.text == "qbar") return P::scalar(field_, alphabet_, field_.qbar());
        if (t.text == "r") return P::scalar(field_, alphabet_, field_.r());
        if (t.text == "rinv") return P::scalar(field_, alphabet_, field_.rinv());
        if (t.text == "i")
          return P::scalar(field_, alphabet_,
                           field_.from_gauss(GaussianRational::unit_i()));
        if (auto g = alphabet_->index(t.text))
          return P::generator(field_, alphabet_, static_cast<std::uint8_t>(*g));
        throw parse_error("unknown symbol '" + t.text + "'", t.pos);
      }
      default:
        throw parse_error("expected '(', number, or symbol", t.pos);
    }
  }

  F field_;
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

}  // namespace detail

template <class F>
StarPolynomial<F> parse_expression(const F& field,
                                   const std::shared_ptr<const Alphabet>& alphabet,
                                   std::string_view src) {
  detail::ExprParser<F> p(field, alphabet, src);
  return p.parse();
}

}  // namespace qstar
