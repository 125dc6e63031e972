#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "qstar/scalar.hpp"
#include "qstar/word.hpp"

namespace qstar {

// Finite scalar combination of words in a free *-algebra.  The term map is
// canonical: no zero coefficients, graded-lex word order.  Equality of
// polynomials is equality of term maps.
template <class F>
class StarPolynomial {
 public:
  using S = typename F::scalar;

  StarPolynomial(F field, std::shared_ptr<const Alphabet> alphabet)
      : field_(std::move(field)), alphabet_(std::move(alphabet)) {}

  static StarPolynomial zero(const F& f, std::shared_ptr<const Alphabet> a) {
    return StarPolynomial(f, std::move(a));
  }
  static StarPolynomial scalar(const F& f, std::shared_ptr<const Alphabet> a, S c) {
    StarPolynomial p(f, std::move(a));
    p.add_term(Word::one(), std::move(c));
    return p;
  }
  static StarPolynomial one(const F& f, std::shared_ptr<const Alphabet> a) {
    return scalar(f, std::move(a), f.one());
  }
  static StarPolynomial word(const F& f, std::shared_ptr<const Alphabet> a, Word w) {
    StarPolynomial p(f, a);
    if (w.size() > a->degree_cap())
      throw degree_error("word exceeds the degree cap");
    p.add_term(std::move(w), f.one());
    return p;
  }
  static StarPolynomial generator(const F& f, std::shared_ptr<const Alphabet> a,
                                  std::uint8_t g, bool star = false) {
    return word(f, std::move(a), Word::gen(g, star));
  }

  const F& field() const { return field_; }
  const std::shared_ptr<const Alphabet>& alphabet() const { return alphabet_; }
  const std::map<Word, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.size());
    return d;
  }
  S coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  void add_term(Word w, S c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(std::move(w), c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend StarPolynomial operator+(const StarPolynomial& x, const StarPolynomial& y) {
    x.check_compatible(y);
    StarPolynomial out = x;
    for (const auto& [w, c] : y.terms_) out.add_term(w, c);
    return out;
  }
  friend StarPolynomial operator-(const StarPolynomial& x, const StarPolynomial& y) {
    x.check_compatible(y);
    StarPolynomial out = x;
    for (const auto& [w, c] : y.terms_) out.add_term(w, -c);
    return out;
  }
  StarPolynomial operator-() const {
    StarPolynomial out(field_, alphabet_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
    return out;
  }
  friend StarPolynomial operator*(const StarPolynomial& x, const StarPolynomial& y) {
    x.check_compatible(y);
    StarPolynomial out(x.field_, x.alphabet_);
    const std::size_t cap = x.alphabet_->degree_cap();
    for (const auto& [wx, cx] : x.terms_)
      for (const auto& [wy, cy] : y.terms_) {
        if (wx.size() + wy.size() > cap)
          throw degree_error("product exceeds the degree cap (" +
                             std::to_string(cap) + " letters)");
        out.add_term(wx * wy, cx * cy);
      }
    return out;
  }
  friend StarPolynomial operator*(const S& c, const StarPolynomial& p) {
    StarPolynomial out(p.field_, p.alphabet_);
    for (const auto& [w, pc] : p.terms_) out.add_term(w, c * pc);
    return out;
  }

  StarPolynomial adjoint() const {
    StarPolynomial out(field_, alphabet_);
    for (const auto& [w, c] : terms_) out.add_term(w.adjoint(), qstar::conj(c));
    return out;
  }

  StarPolynomial pow(std::size_t n) const {
    StarPolynomial out = one(field_, alphabet_);
    for (std::size_t i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  friend bool operator==(const StarPolynomial& x, const StarPolynomial& y) {
    x.check_compatible(y);
    return x.terms_ == y.terms_;
  }
  friend bool operator!=(const StarPolynomial& x, const StarPolynomial& y) {
    return !(x == y);
  }

 private:
  void check_compatible(const StarPolynomial& other) const {
    if (alphabet_ != other.alphabet_ && !alphabet_->same(*other.alphabet_))
      throw context_error("mixing polynomials over different alphabets");
  }

  F field_;
  std::shared_ptr<const Alphabet> alphabet_;
  std::map<Word, S> terms_;
};

// Capture-free word substitution: letter g maps to images[g], starred
// letters to the image's adjoint.  The result lives over the images'
// alphabet; callers normal-form it under the target relations themselves.
template <class F>
StarPolynomial<F> substitute(const StarPolynomial<F>& p,
                             const std::vector<StarPolynomial<F>>& images) {
  if (images.size() != p.alphabet()->size())
    throw context_error("substitution needs one image per generator");
  const auto& target_alphabet = images.front().alphabet();
  auto out = StarPolynomial<F>::zero(p.field(), target_alphabet);
  std::vector<StarPolynomial<F>> star_images;
  star_images.reserve(images.size());
  for (const auto& im : images) star_images.push_back(im.adjoint());
  for (const auto& [w, c] : p.terms()) {
    auto acc = StarPolynomial<F>::scalar(p.field(), target_alphabet, c);
    for (const Letter& l : w.letters)
      acc = acc * (l.star ? star_images[l.gen] : images[l.gen]);
    out = out + acc;
  }
  return out;
}

}  // namespace qstar
