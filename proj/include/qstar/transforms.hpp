#pragma once

#include <memory>

#include "qstar/rewrite.hpp"

namespace qstar {

// Truncation order for the geometric series that inverts the generator
// substitution: the series is replaced by its partial sum of order N and
// every identity acquires a closed-form defect of size O(|q|^{N+1}).
struct PartialSumSpec {
  std::size_t N = 0;
};

inline std::shared_ptr<const Alphabet> deformed_pair_alphabet() {
  return Alphabet::make({"s1", "s2"});
}

inline std::shared_ptr<const Alphabet> orthogonal_pair_alphabet() {
  return Alphabet::make({"t1", "t2"});
}

namespace detail {

// The substitutions below divide by r = (1-q^2)^{1/2}, so they need q real
// with |q| < 1 (exact mode) or |q| < 1 (float mode).
template <class F>
void require_substitution_q(const F& f) {
  if constexpr (F::exact) {
    const auto& q = f.ctx->q();
    if (q.im != 0)
      throw mode_error("generator substitution needs real q in exact mode, got q = " +
                       gauss_to_string(q));
    if (!(q.norm_sq() < 1))
      throw mode_error("generator substitution needs |q| < 1, got q = " +
                       gauss_to_string(q));
  } else {
    if (!(std::abs(f.ctx->q) < 1.0))
      throw mode_error("generator substitution needs |q| < 1");
  }
}

}  // namespace detail

template <class F>
struct Lemma1Generators {
  StarPolynomial<F> t1, t2;
};

// Orthogonal isometry pair inside the deformed algebra:
//   t1 = s1,
//   t2 = (1 - s1 s1*) s2 (1 - s1 s1* + rinv s1 s1*).
// The right factor rescales s2 on the range of s1 so that t2 lands in the
// complement of that range with unit norm: t1* t2 = 0 and t2* t2 = 1 under
// the deformed relations.
template <class F>
Lemma1Generators<F> lemma1_generators(const F& f,
                                      std::shared_ptr<const Alphabet> a = nullptr) {
  detail::require_substitution_q(f);
  if (!a) a = deformed_pair_alphabet();
  using P = StarPolynomial<F>;
  auto one = P::one(f, a);
  auto s1 = P::generator(f, a, 0);
  auto s2 = P::generator(f, a, 1);
  auto p = s1 * s1.adjoint();
  auto t2 = (one - p) * s2 * (one - p + f.rinv() * p);
  return {s1, t2};
}

// t2 rescaled on the range of t1: t2 (1 - t1 t1* + r t1 t1*).  This is the
// single summand from which the series for the inverse substitution is
// built; t1* t̃2 = 0 and t̃2* t̃2 = 1 - q^2 t1 t1* under the orthogonal
// relations.
template <class F>
StarPolynomial<F> tilde_t2(const F& f, std::shared_ptr<const Alphabet> a = nullptr) {
  detail::require_substitution_q(f);
  if (!a) a = orthogonal_pair_alphabet();
  using P = StarPolynomial<F>;
  auto one = P::one(f, a);
  auto t1 = P::generator(f, a, 0);
  auto t2 = P::generator(f, a, 1);
  auto p = t1 * t1.adjoint();
  return t2 * (one - p + f.r() * p);
}

// Partial sum of the series recovering the deformed generator:
//   s2^(N) = sum_{i=0}^{N} q^i t1^i t̃2 (t1*)^i.
// As N grows this converges in norm to an isometry satisfying the deformed
// relation with s1 = t1; at finite N the defects have exact closed forms
// with coefficient magnitude |q|^(N+1) (or |q|^(2N+2) for the isometry
// defect).
template <class F>
StarPolynomial<F> lemma2_partial_sum(const F& f, PartialSumSpec spec,
                                     std::shared_ptr<const Alphabet> a = nullptr) {
  if (!a) a = orthogonal_pair_alphabet();
  using P = StarPolynomial<F>;
  auto tilde = tilde_t2(f, a);
  auto sum = P::zero(f, a);
  auto qi = f.one();
  for (std::size_t i = 0; i <= spec.N; ++i) {
    auto left = P::word(f, a, Word::gen(0, false, i));
    auto right = P::word(f, a, Word::gen(0, true, i));
    sum = sum + qi * (left * tilde * right);
    qi = qi * f.q();
  }
  return sum;
}

// Substitute the orthogonal-pair expressions back into the partial sum and
// compare with s2 under the deformed relations.  The result telescopes to a
// single term, -q^{N+1} s1^{N+1} s2 (s1*)^{N+1}, which is the entire
// truncation error of the round trip.
template <class F>
StarPolynomial<F> roundtrip_defect(const F& f, std::size_t N) {
  auto rs = RewriteSystem<F>::deformed_cuntz2(f);
  auto g = lemma1_generators(f, rs.alphabet());
  auto s2n = lemma2_partial_sum(f, PartialSumSpec{N});
  auto back = substitute(s2n, {g.t1, g.t2});
  auto s2 = StarPolynomial<F>::generator(f, rs.alphabet(), 1);
  return rs.normal_form(back) - s2;
}

// Opposite composition order: push t1, t2 through the substitution s1 -> t1,
// s2 -> s2^(N) and compare with the original generators under the orthogonal
// relations.  The rescaling factors cancel exactly, so this defect is zero
// at every truncation order.
template <class F>
StarPolynomial<F> isomorphism_witness_defect(const F& f, std::size_t N) {
  auto rs = RewriteSystem<F>::cuntz_toeplitz2(f);
  auto g = lemma1_generators(f);
  auto t1 = StarPolynomial<F>::generator(f, rs.alphabet(), 0);
  auto s2n = lemma2_partial_sum(f, PartialSumSpec{N}, rs.alphabet());
  auto composite = substitute(g.t2, {t1, s2n});
  auto t2 = StarPolynomial<F>::generator(f, rs.alphabet(), 1);
  return rs.normal_form(composite) - t2;
}

}  // namespace qstar
