#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qstar/polynomial.hpp"

namespace qstar {

enum class RelationFamily {
  CuntzToeplitz2,  // t_i* t_j = delta_ij
  DeformedCuntz2,  // isometries with s1* s2 = q s2 s1*, |q| < 1
  QCommuting2,     // isometries with s2 s1 = q s1 s2, |q| = 1
  Cuntz2,          // Cuntz-Toeplitz plus t2 t2* = 1 - t1 t1*
  OInfinity,       // u_i* u_j = delta_ij, i, j <= k
};

inline std::string family_name(RelationFamily f) {
  switch (f) {
    case RelationFamily::CuntzToeplitz2: return "cuntz_toeplitz2";
    case RelationFamily::DeformedCuntz2: return "deformed_cuntz2";
    case RelationFamily::QCommuting2: return "q_commuting2";
    case RelationFamily::Cuntz2: return "cuntz2";
    case RelationFamily::OInfinity: return "o_infinity";
  }
  return "?";
}

// One defining relation in "lhs = rhs" form, used both to drive rewriting
// (oriented lhs -> rhs) and as the checklist for operator models.
template <class F>
struct Relation {
  std::string name;
  StarPolynomial<F> lhs;
  StarPolynomial<F> rhs;
};

namespace detail {

template <class F>
bool q_on_unit_circle(const F& f) {
  if constexpr (F::exact) {
    return f.ctx->q().norm_sq() == 1;
  } else {
    return std::abs(std::abs(f.ctx->q) - 1.0) <= 1e-12;
  }
}

template <class F>
bool q_inside_unit_disc(const F& f) {
  if constexpr (F::exact) {
    return f.ctx->q().norm_sq() < 1;
  } else {
    return std::abs(f.ctx->q) < 1.0;
  }
}

}  // namespace detail

// Oriented *-closed rewrite rules for one relation family.  Contraction
// rules (the ones that shorten a word) always fire before reordering rules,
// and within a priority class the leftmost redex wins, so normal forms are
// deterministic.
// The q-commuting family needs two derived contraction families on top of
// its listed relations: s2* s1^k s2 -> qbar^k s1^k and the adjoint pair
// s2* (s1*)^k s2 -> q^k (s1*)^k, for every k >= 1.  Both follow from
// s2 s1 = q s1 s2 and s2* s2 = 1.  Without them the overlap s1* s2* s2 has
// two distinct irreducible descendants (s1* versus qbar s2* s1* s2) and
// normal_form stops commuting with adjoint.  Since k is unbounded they are
// stored as parametric bridge rules rather than enumerated words; with them
// every critical pair joins (checked by hand for each rule/bridge overlap
// and exercised by the randomized rewriter-health suite).
// Termination: each step either removes a starred-before-unstarred
// inversion, shortens the word, or replaces a word by lexicographically
// smaller ones of the same length.  Bridges shorten by two letters.
template <class F>
class RewriteSystem {
 public:
  using P = StarPolynomial<F>;
  using S = typename F::scalar;

  static RewriteSystem cuntz_toeplitz2(const F& f) {
    RewriteSystem rs(f, RelationFamily::CuntzToeplitz2, Alphabet::make({"t1", "t2"}));
    rs.add_isometry_rules(true);
    return rs;
  }

  static RewriteSystem deformed_cuntz2(const F& f) {
    if (!detail::q_inside_unit_disc(f))
      throw config_error("deformed family requires |q| < 1");
    RewriteSystem rs(f, RelationFamily::DeformedCuntz2, Alphabet::make({"s1", "s2"}));
    rs.add_rule(Word::gen(0, true) * Word::gen(0), P::one(f, rs.alphabet_));
    rs.add_rule(Word::gen(1, true) * Word::gen(1), P::one(f, rs.alphabet_));
    // s1* s2 = q s2 s1* and its adjoint orientation
    rs.add_rule(Word::gen(0, true) * Word::gen(1),
                f.q() * P::word(f, rs.alphabet_, Word::gen(1) * Word::gen(0, true)), 1);
    rs.add_rule(Word::gen(1, true) * Word::gen(0),
                f.qbar() * P::word(f, rs.alphabet_, Word::gen(0) * Word::gen(1, true)), 1);
    return rs;
  }

  static RewriteSystem q_commuting2(const F& f) {
    if (!detail::q_on_unit_circle(f))
      throw config_error("q-commuting family requires |q| = 1");
    RewriteSystem rs(f, RelationFamily::QCommuting2, Alphabet::make({"s1", "s2"}));
    rs.add_rule(Word::gen(0, true) * Word::gen(0), P::one(f, rs.alphabet_));
    rs.add_rule(Word::gen(1, true) * Word::gen(1), P::one(f, rs.alphabet_));
    // s2 s1 = q s1 s2 and its adjoint orientation
    rs.add_rule(Word::gen(1) * Word::gen(0),
                f.q() * P::word(f, rs.alphabet_, Word::gen(0) * Word::gen(1)), 1);
    rs.add_rule(Word::gen(0, true) * Word::gen(1, true),
                f.qbar() * P::word(f, rs.alphabet_, Word::gen(1, true) * Word::gen(0, true)),
                1);
    // Derived contraction families closing the s1* s2* s2 overlap; see the
    // class comment.
    rs.bridges_.push_back({Letter{1, true}, Letter{0, false}, Letter{1, false}, f.qbar()});
    rs.bridges_.push_back({Letter{1, true}, Letter{0, true}, Letter{1, false}, f.q()});
    return rs;
  }

  static RewriteSystem cuntz2(const F& f) {
    RewriteSystem rs(f, RelationFamily::Cuntz2, Alphabet::make({"t1", "t2"}));
    rs.add_isometry_rules(true);
    // t2 t2* = 1 - t1 t1*
    auto rhs = P::one(f, rs.alphabet_) -
               P::word(f, rs.alphabet_, Word::gen(0) * Word::gen(0, true));
    rs.add_rule(Word::gen(1) * Word::gen(1, true), rhs);
    return rs;
  }

  static RewriteSystem o_infinity(const F& f, int k) {
    if (k < 1 || k > 32) throw config_error("o_infinity needs 1 <= k <= 32");
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) names.push_back("u" + std::to_string(i));
    RewriteSystem rs(f, RelationFamily::OInfinity, Alphabet::make(std::move(names)));
    rs.add_isometry_rules(true);
    return rs;
  }

  RelationFamily family() const { return family_; }
  const F& field() const { return field_; }
  const std::shared_ptr<const Alphabet>& alphabet() const { return alphabet_; }

  P normal_form(const P& p) const {
    if (p.alphabet() != alphabet_ && !p.alphabet()->same(*alphabet_))
      throw context_error("polynomial does not live over this family's alphabet");
    P out = P::zero(field_, alphabet_);
    std::vector<std::pair<Word, S>> work(p.terms().begin(), p.terms().end());
    std::size_t steps = 0;
    while (!work.empty()) {
      auto [w, c] = std::move(work.back());
      work.pop_back();
      if (++steps > 50'000'000)
        throw qstar_error("rewriting step limit exceeded");
      bool matched = false;
      for (int pri = 0; pri <= max_priority_ && !matched; ++pri) {
        for (std::size_t pos = 0; pos < w.size() && !matched; ++pos) {
          for (const auto& rule : rules_) {
            if (rule.priority != pri || !w.matches_at(rule.lhs, pos)) continue;
            matched = true;
            Word prefix(std::vector<Letter>(w.letters.begin(), w.letters.begin() + pos));
            Word suffix(std::vector<Letter>(
                w.letters.begin() + pos + rule.lhs.size(), w.letters.end()));
            for (const auto& [rw, rc] : rule.rhs.terms())
              work.emplace_back(prefix * rw * suffix, c * rc);
            break;
          }
          if (matched || pri != 0) continue;
          for (const auto& br : bridges_) {
            std::size_t k = bridge_run(w, pos, br);
            if (k == 0) continue;
            matched = true;
            Word prefix(std::vector<Letter>(w.letters.begin(), w.letters.begin() + pos));
            Word run(std::vector<Letter>(w.letters.begin() + pos + 1,
                                         w.letters.begin() + pos + 1 + k));
            Word suffix(std::vector<Letter>(
                w.letters.begin() + pos + k + 2, w.letters.end()));
            S scaled = std::move(c);
            for (std::size_t i = 0; i < k; ++i) scaled = scaled * br.scale;
            work.emplace_back(prefix * run * suffix, std::move(scaled));
            break;
          }
        }
      }
      if (!matched) out.add_term(std::move(w), std::move(c));
    }
    return out;
  }

  bool is_normal(const Word& w) const {
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      for (const auto& rule : rules_)
        if (w.matches_at(rule.lhs, pos)) return false;
      for (const auto& br : bridges_)
        if (bridge_run(w, pos, br) != 0) return false;
    }
    return true;
  }

  // Coefficient of the empty word in normal form = <vacuum, p vacuum> in the
  // family's Fock representation.  Only meaningful for families whose normal
  // forms are spans of (creators)(annihilators) words; the q-commuting family
  // has no distinguished Fock vacuum and the Cuntz completeness relation is
  // incompatible with one, so both are rejected.
  S vacuum_expectation(const P& p) const {
    if (family_ == RelationFamily::QCommuting2)
      throw mode_error("vacuum functional is undefined for the q-commuting family");
    if (family_ == RelationFamily::Cuntz2)
      throw mode_error("vacuum functional is undefined once t1 t1* + t2 t2* = 1");
    return normal_form(p).coeff(Word::one());
  }

  // All unstarred words of length <= L, in graded-lex order.  This matches
  // the Fock word-basis enumeration used by the operator modules.
  std::vector<Word> word_basis(std::size_t L) const {
    std::vector<Word> out{Word::one()};
    std::size_t level_begin = 0;
    for (std::size_t l = 1; l <= L; ++l) {
      std::size_t level_end = out.size();
      for (std::size_t i = level_begin; i < level_end; ++i)
        for (std::uint8_t g = 0; g < alphabet_->size(); ++g)
          out.push_back(out[i] * Word::gen(g));
      level_begin = level_end;
    }
    return out;
  }

  // Gram matrix of the word vectors s_w applied to the vacuum:
  // G[w][v] = vacuum_expectation(adjoint(s_w) s_v).  Hermitian by
  // construction; the lower triangle is filled by conjugate symmetry.
  struct Gram {
    std::vector<Word> words;
    std::vector<std::vector<S>> entries;
  };

  Gram gram_matrix(std::size_t L) const {
    Gram g;
    g.words = word_basis(L);
    const std::size_t n = g.words.size();
    g.entries.assign(n, std::vector<S>(n, field_.zero()));
    std::vector<P> word_polys;
    word_polys.reserve(n);
    for (const auto& w : g.words) word_polys.push_back(P::word(field_, alphabet_, w));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        S e = vacuum_expectation(word_polys[i].adjoint() * word_polys[j]);
        g.entries[i][j] = e;
        g.entries[j][i] = qstar::conj(e);
      }
    }
    return g;
  }

  // The defining relations as (name, lhs, rhs) checklist items.
  std::vector<Relation<F>> relations() const {
    std::vector<Relation<F>> out;
    auto gen = [&](std::uint8_t g, bool star) {
      return P::generator(field_, alphabet_, g, star);
    };
    auto word_p = [&](const Word& w) { return P::word(field_, alphabet_, w); };
    auto one = P::one(field_, alphabet_);
    auto zero = P::zero(field_, alphabet_);
    auto nm = [&](std::uint8_t g, bool star) {
      return alphabet_->name(g) + (star ? "*" : "");
    };
    switch (family_) {
      case RelationFamily::CuntzToeplitz2:
      case RelationFamily::Cuntz2:
      case RelationFamily::OInfinity: {
        for (std::uint8_t a = 0; a < alphabet_->size(); ++a)
          for (std::uint8_t b = 0; b < alphabet_->size(); ++b)
            out.push_back({nm(a, true) + " " + nm(b, false) + " = " +
                               (a == b ? "1" : "0"),
                           gen(a, true) * gen(b, false), a == b ? one : zero});
        if (family_ == RelationFamily::Cuntz2)
          out.push_back({"t1 t1* + t2 t2* = 1",
                         word_p(Word::gen(0) * Word::gen(0, true)) +
                             word_p(Word::gen(1) * Word::gen(1, true)),
                         one});
        break;
      }
      case RelationFamily::DeformedCuntz2: {
        out.push_back({"s1* s1 = 1", gen(0, true) * gen(0, false), one});
        out.push_back({"s2* s2 = 1", gen(1, true) * gen(1, false), one});
        out.push_back({"s1* s2 = q s2 s1*", gen(0, true) * gen(1, false),
                       field_.q() * word_p(Word::gen(1) * Word::gen(0, true))});
        out.push_back({"s2* s1 = qbar s1 s2*", gen(1, true) * gen(0, false),
                       field_.qbar() * word_p(Word::gen(0) * Word::gen(1, true))});
        break;
      }
      case RelationFamily::QCommuting2: {
        out.push_back({"s1* s1 = 1", gen(0, true) * gen(0, false), one});
        out.push_back({"s2* s2 = 1", gen(1, true) * gen(1, false), one});
        out.push_back({"s2 s1 = q s1 s2", gen(1, false) * gen(0, false),
                       field_.q() * word_p(Word::gen(0) * Word::gen(1))});
        break;
      }
    }
    return out;
  }

 private:
  RewriteSystem(F f, RelationFamily fam, std::shared_ptr<const Alphabet> a)
      : field_(std::move(f)), family_(fam), alphabet_(std::move(a)) {}

  struct Rule {
    Word lhs;
    P rhs;
    int priority;  // 0 = contraction, fired before 1 = reorder
  };

  // left inner^k right -> scale^k inner^k, one instance per k >= 1.  Fired
  // in the contraction pass.  inner differs from right in every bridge we
  // install, so the maximal inner-run is the only possible match.
  struct Bridge {
    Letter left;
    Letter inner;
    Letter right;
    S scale;
  };

  // Run length k of a bridge instance starting at pos, or 0 if none.
  std::size_t bridge_run(const Word& w, std::size_t pos, const Bridge& br) const {
    if (w.letters[pos] != br.left) return 0;
    std::size_t k = 0;
    while (pos + 1 + k < w.size() && w.letters[pos + 1 + k] == br.inner) ++k;
    if (k == 0 || pos + 1 + k >= w.size() || w.letters[pos + 1 + k] != br.right)
      return 0;
    return k;
  }

  void add_rule(Word lhs, P rhs, int priority = 0) {
    max_priority_ = std::max(max_priority_, priority);
    rules_.push_back(Rule{std::move(lhs), std::move(rhs), priority});
  }

  void add_isometry_rules(bool orthogonal) {
    for (std::uint8_t a = 0; a < alphabet_->size(); ++a)
      for (std::uint8_t b = 0; b < alphabet_->size(); ++b) {
        if (a == b)
          add_rule(Word::gen(a, true) * Word::gen(a), P::one(field_, alphabet_));
        else if (orthogonal)
          add_rule(Word::gen(a, true) * Word::gen(b), P::zero(field_, alphabet_));
      }
  }

  F field_;
  RelationFamily family_;
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Rule> rules_;
  std::vector<Bridge> bridges_;
  int max_priority_ = 0;
};

}  // namespace qstar
