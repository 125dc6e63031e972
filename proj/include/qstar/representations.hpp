#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qstar/eigen_bridge.hpp"
#include "qstar/operators.hpp"
#include "qstar/rewrite.hpp"

namespace qstar {

// A concrete operator model of one relation family: a matrix per generator,
// all acting on a common truncated space.  adjoint_ops is populated exactly
// when the basis carries a nontrivial Gram form; the matrix of s_i* is then
// not the conjugate transpose of the matrix of s_i and must be stored.
template <class F>
struct GeneratorSet {
  RewriteSystem<F> relations;
  GradedSpace::Ptr space;
  std::map<std::string, TruncatedOperator<F>> ops;
  std::map<std::string, TruncatedOperator<F>> adjoint_ops;

  const TruncatedOperator<F>& op(const std::string& name) const {
    auto it = ops.find(name);
    if (it == ops.end()) throw config_error("model has no generator named " + name);
    return it->second;
  }

  TruncatedOperator<F> op_adjoint(const std::string& name) const {
    auto it = adjoint_ops.find(name);
    if (it != adjoint_ops.end()) return it->second;
    return op(name).adjoint();
  }
};

// Words become products of generator matrices (starred letters use the
// stored adjoints), terms are summed with their coefficients.
template <class F>
TruncatedOperator<F> evaluate(const GeneratorSet<F>& gs, const StarPolynomial<F>& p) {
  const auto& alpha = gs.relations.alphabet();
  if (p.alphabet() != alpha && !p.alphabet()->same(*alpha))
    throw context_error("polynomial alphabet does not match the generator set");
  const F& f = gs.relations.field();
  auto out = TruncatedOperator<F>::zero(f, gs.space);
  for (const auto& [w, coef] : p.terms()) {
    auto m = TruncatedOperator<F>::identity(f, gs.space);
    for (const Letter& l : w.letters) {
      const std::string& name = alpha->name(l.gen);
      m = m * (l.star ? gs.op_adjoint(name) : gs.op(name));
    }
    out = out + coef * m;
  }
  return out;
}

// Unilateral shift on the sequence space: e_n -> e_{n+1}, the top level
// image falls off the truncation.
template <class F>
TruncatedOperator<F> shift_operator(const F& f, const GradedSpace::Ptr& sp) {
  if (sp->kind() != SpaceKind::NaturalNumbers || sp->truncation() < 1)
    throw config_error("shift operator needs a sequence space with at least two levels");
  auto s = TruncatedOperator<F>::zero(f, sp, 1, -1);
  for (std::size_t n = 0; n + 1 < sp->size(); ++n) s.set_entry(n + 1, n, f.one());
  return s;
}

template <class F>
TruncatedOperator<F> shift_operator(const F& f, std::size_t L) {
  return shift_operator(f, GradedSpace::natural_numbers(L));
}

// Diagonal weight q^n on the sequence space, n = 0 at the lowest level.
template <class F>
TruncatedOperator<F> diag_q(const F& f, const GradedSpace::Ptr& sp) {
  if (sp->kind() != SpaceKind::NaturalNumbers)
    throw config_error("diagonal q-weight needs a sequence space");
  auto d = TruncatedOperator<F>::zero(f, sp);
  auto p = f.one();
  for (std::size_t n = 0; n < sp->size(); ++n) {
    d.set_entry(n, n, p);
    p = p * f.q();
  }
  return d;
}

template <class F>
TruncatedOperator<F> diag_q(const F& f, std::size_t L) {
  return diag_q(f, GradedSpace::natural_numbers(L));
}

namespace detail {

template <class F>
typename F::scalar scalar_pow(const F& f, const typename F::scalar& base, std::size_t n) {
  auto p = f.one();
  for (std::size_t i = 0; i < n; ++i) p = p * base;
  return p;
}

// Creation matrices on a word space: generator g prepends its letter, words
// that would outgrow the truncation are dropped (hence valid_depth L - 1).
template <class F>
std::vector<TruncatedOperator<F>> creation_ops(const F& f, const GradedSpace::Ptr& sp) {
  std::vector<TruncatedOperator<F>> ops;
  ops.reserve(sp->arity());
  for (std::size_t g = 0; g < sp->arity(); ++g) {
    auto t = TruncatedOperator<F>::zero(f, sp, 1, -1);
    for (std::size_t i = 0; i < sp->size(); ++i) {
      const auto& w = sp->word_at(i);
      std::vector<std::uint8_t> iw;
      iw.reserve(w.size() + 1);
      iw.push_back(std::uint8_t(g));
      iw.insert(iw.end(), w.begin(), w.end());
      std::size_t j = sp->word_index(iw);
      if (j < sp->size()) t.set_entry(j, i, f.one());
    }
    ops.push_back(std::move(t));
  }
  return ops;
}

template <class F>
GeneratorSet<F> fock_model(RewriteSystem<F> rs, std::size_t d, std::size_t L) {
  auto sp = GradedSpace::fock_words(d, L);
  GeneratorSet<F> out{std::move(rs), sp, {}, {}};
  auto ops = creation_ops(out.relations.field(), sp);
  for (std::size_t g = 0; g < d; ++g)
    out.ops.emplace(out.relations.alphabet()->name(g), std::move(ops[g]));
  return out;
}

inline int rat_sign(const BigRat& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

// Sign of a + b sqrt(R) for rational a, b and positive rational R, decided
// without leaving exact arithmetic.
inline int radical_sign(const BigRat& a, const BigRat& b, const BigRat& R) {
  if (b == 0) return rat_sign(a);
  if (a == 0) return rat_sign(b);
  if (a > 0 && b > 0) return 1;
  if (a < 0 && b < 0) return -1;
  int dominant = rat_sign(a * a - b * b * R);
  if (dominant == 0) return 0;
  return dominant > 0 ? rat_sign(a) : -rat_sign(a);
}

inline bool exact_is_real(const ExactScalar& s) {
  return s.a().im == 0 && s.b().im == 0;
}

inline int exact_real_sign(const ExactScalar& s) {
  BigRat R = s.ctx() && !s.b().is_zero() ? s.ctx()->one_minus_q_sq().re : BigRat(1);
  return radical_sign(s.a().re, s.b().re, R);
}

// Entrywise self-adjointness for the float coefficient matrices; the exact
// path insists on diagonal input instead, so it never needs this.
template <class F>
bool float_selfadjoint(const TruncatedOperator<F>& c, double tol) {
  double scale = 0;
  for (std::size_t r = 0; r < c.dim(); ++r)
    for (const auto& [col, v] : c.row(r)) scale = std::max(scale, std::abs(to_c(v)));
  double bound = tol * std::max(1.0, scale);
  for (std::size_t r = 0; r < c.dim(); ++r)
    for (const auto& [col, v] : c.row(r))
      if (std::abs(to_c(v) - std::conj(to_c(c.entry(col, r)))) > bound) return false;
  return true;
}

// Spectral gate shared by the coefficient validators.  lo/hi give the
// admissible closed interval; strict additionally forbids the endpoints.
template <class F>
void require_real_spectrum(const TruncatedOperator<F>& c, const std::string& what,
                           bool strict) {
  const F& f = c.field();
  if constexpr (F::exact) {
    for (std::size_t r = 0; r < c.dim(); ++r)
      for (const auto& [col, v] : c.row(r))
        if (col != r)
          throw mode_error(what +
                           ": exact spectral checks need a diagonal matrix; use float mode");
    for (std::size_t r = 0; r < c.dim(); ++r) {
      auto e = c.entry(r, r);
      if (!exact_is_real(e)) throw config_error(what + " must be self-adjoint");
      int lo = exact_real_sign(e);
      int hi = exact_real_sign(e - f.one());
      bool bad = strict ? (lo <= 0 || hi >= 0) : (lo < 0 || hi > 0);
      if (bad)
        throw config_error(what + (strict ? " spectrum must stay strictly inside (0, 1)"
                                          : " spectrum leaves [0, 1]"));
    }
  } else {
    if (!float_selfadjoint(c, 1e-10)) throw config_error(what + " must be self-adjoint");
    auto spec = hermitian_spectrum(to_dense(c), 1e-9);
    double margin = strict ? 1e-9 : -1e-10;
    if (spec.eigenvalues.size() == 0) return;
    if (spec.eigenvalues.minCoeff() < margin || spec.eigenvalues.maxCoeff() > 1.0 - margin)
      throw config_error(what + (strict ? " spectrum must stay strictly inside (0, 1)"
                                        : " spectrum leaves [0, 1]"));
  }
}

// (1 - c^2)^{1/2}: entrywise root on an exact diagonal, spectral function in
// float mode.
template <class F>
TruncatedOperator<F> contraction_complement_root(const TruncatedOperator<F>& c) {
  const F& f = c.field();
  if constexpr (F::exact) {
    auto out = TruncatedOperator<F>::zero(f, c.space());
    out.with_valid_depth(c.valid_depth());
    for (std::size_t r = 0; r < c.dim(); ++r) {
      auto e = c.entry(r, r);
      auto root = (f.one() - e * e).sqrt_opt();
      if (!root)
        throw mode_error("(1 - c^2)^{1/2} has no exact value at diagonal entry " +
                         std::to_string(r) + "; use float mode");
      if (!root->is_zero()) out.set_entry(r, r, *root);
    }
    return out;
  } else {
    auto rest = TruncatedOperator<F>::identity(f, c.space()) - c * c;
    return hermitian_function(rest, [](double x) { return std::sqrt(std::max(0.0, x)); });
  }
}

template <class F>
void require_coefficient_model(const GeneratorSet<F>& pi_u) {
  if (pi_u.relations.family() != RelationFamily::OInfinity)
    throw config_error("block models need coefficient generators from the u family");
}

// Valid depth of a block model: the tensor top, the coefficient creations,
// and (when some needed u_i falls beyond the supply) the last complete
// column block.
template <class F>
int block_model_depth(const GeneratorSet<F>& pi_u, const GradedSpace::Ptr& sp,
                      std::size_t k, std::size_t L) {
  int vd = int(sp->truncation()) - 1;
  for (std::size_t idx = 1; idx <= std::min(k, L + 1); ++idx)
    vd = std::min(vd, pi_u.op("u" + std::to_string(idx)).valid_depth());
  if (k < L + 1) vd = std::min(vd, int(k) - 1);
  return vd;
}

// Row-side companion: a row whose coefficient word starts with letter j
// draws from column block (row block + j), so rows stay complete only while
// they cannot reach past the top block.  `base` carries that reach bound,
// which differs between the two block shapes; partially row-valid
// coefficient operators tighten it further.
template <class F>
int block_model_row_depth(const GeneratorSet<F>& pi_u, std::size_t k, std::size_t L,
                          int base) {
  for (std::size_t idx = 1; idx <= std::min(k, L + 1); ++idx) {
    const auto& u = pi_u.op("u" + std::to_string(idx));
    if (u.row_depth() < int(u.space()->truncation())) base = std::min(base, u.row_depth());
  }
  return base;
}

}  // namespace detail

// Creation operators on the full word space over d letters; adjoints delete
// the leading letter.  d = 2 carries the t-named orthogonality relations,
// larger d the u-named ones.
template <class F>
GeneratorSet<F> fock_cuntz_toeplitz(const F& f, std::size_t d, std::size_t L) {
  auto rs = d == 2 ? RewriteSystem<F>::cuntz_toeplitz2(f)
                   : RewriteSystem<F>::o_infinity(f, int(d));
  return detail::fock_model(std::move(rs), d, L);
}

template <class F>
GeneratorSet<F> fock_o_infinity(const F& f, int k, std::size_t L) {
  auto rs = RewriteSystem<F>::o_infinity(f, k);
  return detail::fock_model(std::move(rs), std::size_t(k), L);
}

// Same matrices as the two-letter word model but carrying the complete-pair
// relation checklist; the truncated model satisfies it only away from the
// vacuum, which the relation report makes visible.
template <class F>
GeneratorSet<F> fock_cuntz2_pair(const F& f, std::size_t L) {
  return detail::fock_model(RewriteSystem<F>::cuntz2(f), 2, L);
}

template <class F>
struct FockModelQ {
  GeneratorSet<F> gens;
  typename RewriteSystem<F>::Gram gram;
};

// Deformed two-letter word model: the generator matrices are plain word
// prepends, the deformation lives in the Gram form and in the explicit
// adjoint matrices.  Moving s1* through leading second-letter factors gives
// the closed adjoint action s1* e_{2^k 1 v} = q^k e_{2^k v}, with pure
// powers of the second letter (and the vacuum) killed; s2* mirrors this
// with conjugated q on leading first letters.
template <class F>
FockModelQ<F> fock_deformed(const F& f, std::size_t L) {
  auto rs = RewriteSystem<F>::deformed_cuntz2(f);
  auto sp = GradedSpace::fock_words(2, L, /*orthonormal=*/false);
  FockModelQ<F> model{GeneratorSet<F>{rs, sp, {}, {}}, rs.gram_matrix(L)};
  auto creations = detail::creation_ops(f, sp);
  model.gens.ops.emplace("s1", std::move(creations[0]));
  model.gens.ops.emplace("s2", std::move(creations[1]));
  for (int g = 0; g < 2; ++g) {
    auto a = TruncatedOperator<F>::zero(f, sp, -1);
    const auto qg = g == 0 ? f.q() : f.qbar();
    const std::uint8_t other = std::uint8_t(1 - g);
    for (std::size_t i = 0; i < sp->size(); ++i) {
      const auto& w = sp->word_at(i);
      std::size_t k = 0;
      while (k < w.size() && w[k] == other) ++k;
      if (k == w.size()) continue;
      std::vector<std::uint8_t> rest(w.begin(), w.begin() + k);
      rest.insert(rest.end(), w.begin() + k + 1, w.end());
      a.set_entry(sp->word_index(rest), i, detail::scalar_pow(f, qg, k));
    }
    model.gens.adjoint_ops.emplace(g == 0 ? "s1" : "s2", std::move(a));
  }
  return model;
}

// Block model of the deformed pair over a supply of orthogonal-range
// coefficients u_1..u_k: s1 shifts the block index, s2 is upper block
// triangular with row j scaled by q^j, diagonal blocks carrying u_1 and the
// off-diagonal ones the radical weight times u_{column - row + 1}.
template <class F>
GeneratorSet<F> build_qcun(const GeneratorSet<F>& pi_u, std::size_t L) {
  detail::require_coefficient_model(pi_u);
  const F& f = pi_u.relations.field();
  const std::size_t k = pi_u.relations.alphabet()->size();
  if (k < L)
    throw config_error("need at least " + std::to_string(L) +
                       " coefficient generators, have " + std::to_string(k));
  auto rs = RewriteSystem<F>::deformed_cuntz2(f);
  auto nat = GradedSpace::natural_numbers(L);
  auto sp = GradedSpace::tensor_pair(nat, pi_u.space);
  GeneratorSet<F> out{std::move(rs), sp, {}, {}};
  out.ops.emplace("s1", tensor(shift_operator(f, nat),
                               TruncatedOperator<F>::identity(f, pi_u.space), sp));
  auto s2 = TruncatedOperator<F>::zero(f, sp, 1, int(std::min(k, L + 1)) - 2);
  const auto radical = f.r();
  auto qa = f.one();
  for (std::size_t a = 0; a <= L; ++a) {
    for (std::size_t b = a; b <= L; ++b) {
      std::size_t idx = b - a + 1;
      if (idx > k) continue;
      auto scale = a == b ? qa : qa * radical;
      const auto& u = pi_u.op("u" + std::to_string(idx));
      for (std::size_t ru = 0; ru < u.dim(); ++ru)
        for (const auto& [cu, v] : u.row(ru))
          s2.add_entry(sp->pair_index(a, ru), sp->pair_index(b, cu), scale * v);
    }
    qa = qa * f.q();
  }
  s2.with_valid_depth(detail::block_model_depth(pi_u, sp, k, L));
  s2.with_row_depth(detail::block_model_row_depth(
      pi_u, k, L, std::max(0, int(L) - int(k) + 2)));
  out.ops.emplace("s2", std::move(s2));
  return out;
}

// The undeformed companion of build_qcun: t1 shifts blocks, t2 keeps only
// the first block row (u_1 u_2 ...).
template <class F>
GeneratorSet<F> build_cun(const GeneratorSet<F>& pi_u, std::size_t L) {
  detail::require_coefficient_model(pi_u);
  const F& f = pi_u.relations.field();
  const std::size_t k = pi_u.relations.alphabet()->size();
  if (k < L)
    throw config_error("need at least " + std::to_string(L) +
                       " coefficient generators, have " + std::to_string(k));
  auto nat = GradedSpace::natural_numbers(L);
  auto sp = GradedSpace::tensor_pair(nat, pi_u.space);
  GeneratorSet<F> out{RewriteSystem<F>::cuntz_toeplitz2(f), sp, {}, {}};
  out.ops.emplace("t1", tensor(shift_operator(f, nat),
                               TruncatedOperator<F>::identity(f, pi_u.space), sp));
  auto t2 = TruncatedOperator<F>::zero(f, sp, 1, int(std::min(k, L + 1)) - 2);
  for (std::size_t b = 0; b <= L && b + 1 <= k; ++b) {
    const auto& u = pi_u.op("u" + std::to_string(b + 1));
    for (std::size_t ru = 0; ru < u.dim(); ++ru)
      for (const auto& [cu, v] : u.row(ru))
        t2.add_entry(sp->pair_index(0, ru), sp->pair_index(b, cu), v);
  }
  t2.with_valid_depth(detail::block_model_depth(pi_u, sp, k, L));
  t2.with_row_depth(detail::block_model_row_depth(
      pi_u, k, L, k > L + 1 ? 0 : int(sp->truncation())));
  out.ops.emplace("t2", std::move(t2));
  return out;
}

// Morphisms of coefficient models extend to the block models as identity
// tensor the morphism.
template <class F>
TruncatedOperator<F> functor_F_morphism(const TruncatedOperator<F>& lambda,
                                        const GradedSpace::Ptr& target) {
  if (target->kind() != SpaceKind::TensorPair || !target->right()->same(*lambda.space()))
    throw operator_error(
        "functor target must be a tensor space whose right factor carries the morphism");
  auto idl = TruncatedOperator<F>::identity(lambda.field(), target->left());
  return tensor(idl, lambda, target);
}

// Tensor extension of a complete Cuntz pair by two positive contraction
// coefficients: the pair acts on the right factor alone and the extra
// contraction c couples the coefficients to the range projections.
template <class F>
GeneratorSet<F> build_free_product_rep(const TruncatedOperator<F>& c1,
                                       const TruncatedOperator<F>& c2,
                                       const GeneratorSet<F>& pi_tilde) {
  if (pi_tilde.relations.family() != RelationFamily::Cuntz2)
    throw config_error("free-product model needs a complete Cuntz-pair input");
  const F& f = pi_tilde.relations.field();
  if (!c1.space()->same(*c2.space()))
    throw config_error("contraction coefficients must share one space");
  detail::require_real_spectrum(c1, "first coefficient", /*strict=*/false);
  detail::require_real_spectrum(c2, "second coefficient", /*strict=*/false);
  auto sp = GradedSpace::tensor_pair(c1.space(), pi_tilde.space);
  GeneratorSet<F> out{pi_tilde.relations, sp, {}, {}};
  auto idh = TruncatedOperator<F>::identity(f, c1.space());
  const auto& t1 = pi_tilde.op("t1");
  const auto& t2 = pi_tilde.op("t2");
  out.ops.emplace("t1", tensor(idh, t1, sp));
  out.ops.emplace("t2", tensor(idh, t2, sp));
  out.ops.emplace("c", tensor(c1, t1 * t1.adjoint(), sp) +
                           tensor(c2, t2 * t2.adjoint(), sp));
  return out;
}

template <class F>
struct WildRep {
  GeneratorSet<F> gens;
  // Coefficient-space pieces behind s2, kept for diagnostics: a1 = t1 c,
  // a2 = t2 (1 - c^2)^{1/2}, and the coupling contraction c itself.
  TruncatedOperator<F> a1;
  TruncatedOperator<F> a2;
  TruncatedOperator<F> c;
  // Builder-set reminder that the second coefficient uses the complement
  // root; reports about this model should surface it verbatim.
  std::string note;
};

// Unit-circle pair model: s1 shifts the sequence factor, s2 couples the
// coefficient operators a1, a2 to the diagonal q-weight.  a1* a1 + a2* a2
// reduces to c^2 + (1 - c^2) = 1 and a2* a1 = 0 by range orthogonality, so
// both defining relations hold on safe levels.  The root in a2 (rather than
// the complement itself) is exactly what makes that sum collapse to 1.
template <class F>
WildRep<F> build_wild_rep(const TruncatedOperator<F>& t1, const TruncatedOperator<F>& t2,
                          const TruncatedOperator<F>& c, std::size_t M) {
  const F& f = t1.field();
  auto rs = RewriteSystem<F>::q_commuting2(f);
  if (!t1.space()->same(*t2.space()) || !t1.space()->same(*c.space()))
    throw config_error("Cuntz pair and coefficient must share one space");
  detail::require_real_spectrum(c, "coupling coefficient", /*strict=*/true);
  auto a1 = t1 * c;
  auto a2 = t2 * detail::contraction_complement_root(c);
  auto nat = GradedSpace::natural_numbers(M);
  auto sp = GradedSpace::tensor_pair(t1.space(), nat);
  GeneratorSet<F> gens{std::move(rs), sp, {}, {}};
  auto s = shift_operator(f, nat);
  auto d = diag_q(f, nat);
  gens.ops.emplace("s1",
                   tensor(TruncatedOperator<F>::identity(f, t1.space()), s, sp));
  gens.ops.emplace("s2", tensor(a1, d, sp) + tensor(a2, s * d, sp));
  return WildRep<F>{std::move(gens), std::move(a1), std::move(a2), c,
                    "second coefficient built as a2 = t2 (1 - c^2)^{1/2}; the complement "
                    "root (not the bare complement) is what makes a1* a1 + a2* a2 = 1 "
                    "hold identically"};
}

// Manifest line plus one matrix block per generator (explicit adjoints
// last, marked with a star).
template <class F>
void export_generator_set(const GeneratorSet<F>& gs, std::ostream& os) {
  os << "{\"family\": \"" << family_name(gs.relations.family()) << "\", \"space\": \""
     << space_kind_name(gs.space->kind()) << "\", \"truncation\": "
     << gs.space->truncation() << ", \"dim\": " << gs.space->size()
     << ", \"generators\": [";
  bool first = true;
  for (const auto& [name, op] : gs.ops) {
    os << (first ? "" : ", ") << "{\"name\": \"" << name
       << "\", \"raise\": " << op.raise()
       << ", \"valid_depth\": " << op.valid_depth() << "}";
    first = false;
  }
  os << "], \"explicit_adjoints\": " << (gs.adjoint_ops.empty() ? "false" : "true")
     << "}\n";
  for (const auto& [name, op] : gs.ops) {
    os << name << "\n";
    export_operator(op, os);
  }
  for (const auto& [name, op] : gs.adjoint_ops) {
    os << name << "*\n";
    export_operator(op, os);
  }
}

}  // namespace qstar
