#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qstar/eigen_bridge.hpp"
#include "qstar/errors.hpp"
#include "qstar/operators.hpp"
#include "qstar/printer.hpp"
#include "qstar/representations.hpp"
#include "qstar/rewrite.hpp"

namespace qstar {

// One verdict: either an exact identity (pass iff the residual operator is
// literally zero) or a numeric bound (pass iff residual <= tolerance).  Every
// numeric item records the depth at which it was evaluated, so a report never
// silently claims more than the validity metadata certifies.
struct CheckItem {
  std::string name;
  std::string kind;  // "exact" or "numeric"
  double residual = 0.0;
  bool exact_zero = false;  // meaningful only when kind == "exact"
  int depth = 0;
  double tolerance = 0.0;  // meaningful only when kind == "numeric"
  bool pass = false;
};

struct VerificationReport {
  std::string q;
  std::string mode;   // "exact" or "float"
  std::string space;  // basis kind, or "none"
  int truncation = -1;
  std::vector<CheckItem> items;
  std::vector<std::string> notes;

  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }

  void merge(const VerificationReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["environment"] = {{"q", q}, {"mode", mode}, {"space", space}, {"truncation", truncation}};
    j["items"] = nlohmann::ordered_json::array();
    for (const auto& it : items) {
      nlohmann::ordered_json e;
      e["name"] = it.name;
      e["kind"] = it.kind;
      e["residual"] = it.residual;
      if (it.kind == "exact") e["exact_zero"] = it.exact_zero;
      e["depth"] = it.depth;
      if (it.kind == "numeric") e["tolerance"] = it.tolerance;
      e["pass"] = it.pass;
      j["items"].push_back(std::move(e));
    }
    j["notes"] = notes;
    j["pass"] = all_pass();
    return j;
  }

  void write_text(std::ostream& os) const {
    os << "q = " << q << "  mode = " << mode << "  space = " << space;
    if (truncation >= 0) os << "  truncation = " << truncation;
    os << "\n";
    for (const auto& it : items) {
      os << (it.pass ? "[PASS] " : "[FAIL] ") << it.name << "  kind=" << it.kind
         << "  residual=" << detail::double_to_string(it.residual) << "  depth=" << it.depth;
      if (it.kind == "numeric")
        os << "  tolerance=" << detail::double_to_string(it.tolerance);
      os << "\n";
    }
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << (all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  }
};

// l1 norm of a polynomial's coefficient vector.  Words in isometry letters
// act with norm at most one, so this bounds the operator norm of the
// symbolic element in any contractive model and is the defect measure the
// partial-sum estimates are stated against.
template <class F>
double coefficient_l1(const StarPolynomial<F>& p) {
  double s = 0.0;
  for (const auto& [w, c] : p.terms()) s += std::abs(detail::to_c(c));
  return s;
}

namespace detail {

template <class F>
std::string describe_q(const F& f) {
  if constexpr (F::exact) {
    return gauss_to_string(f.ctx->q());
  } else {
    auto z = f.q_complex();
    if (z.imag() == 0.0) return double_to_string(z.real());
    std::string out = "(" + double_to_string(z.real());
    if (z.imag() >= 0.0) out += "+";
    return out + double_to_string(z.imag()) + "i)";
  }
}

template <class F>
VerificationReport report_env(const F& f, const GradedSpace::Ptr& sp) {
  VerificationReport rep;
  rep.q = describe_q(f);
  rep.mode = F::exact ? "exact" : "float";
  rep.space = sp ? space_kind_name(sp->kind()) : "none";
  rep.truncation = sp ? int(sp->truncation()) : -1;
  return rep;
}

template <class F>
CheckItem residual_item(std::string name, const TruncatedOperator<F>& d, int depth, double tol) {
  CheckItem it;
  it.name = std::move(name);
  it.depth = depth;
  if constexpr (F::exact) {
    it.kind = "exact";
    auto res = d * safe_projection(d.field(), d.space(), depth);
    it.exact_zero = res.is_zero();
    it.residual = spectral_upper_bound(res);
    it.pass = it.exact_zero;
  } else {
    it.kind = "numeric";
    it.residual = residual_norm(d, depth);
    it.tolerance = tol;
    it.pass = it.residual <= tol;
  }
  return it;
}

}  // namespace detail

// Evaluates every defining relation of the model's rewrite family on the
// stored matrices and reports lhs - rhs per relation.  The requested depth is
// clamped per relation to the certified valid depth of the evaluated
// difference; a relation whose metadata admits no depth at all is an error,
// because reporting it at any depth would overstate what the truncation
// supports.
template <class F>
VerificationReport check_relations(const GeneratorSet<F>& gs, int depth, double tol) {
  if (depth < 0) throw config_error("relation check depth must be nonnegative");
  auto rep = detail::report_env(gs.relations.field(), gs.space);
  for (const auto& rel : gs.relations.relations()) {
    auto d = evaluate(gs, rel.lhs - rel.rhs);
    int use = std::min(depth, d.valid_depth());
    if (use < 0)
      throw operator_error("relation '" + rel.name +
                           "' has no certified depth on this truncation");
    rep.items.push_back(detail::residual_item(rel.name, d, use, tol));
  }
  return rep;
}

struct PsdCheckResult {
  double min_eigenvalue = 0.0;  // floating-point estimate, always computed
  double margin = 0.0;          // residual slack of the spectral decomposition
  bool exact_certified = false;
  bool pass = false;
};

namespace detail {

// Hermitian Gaussian elimination over the exact scalar field.  Positive
// semidefiniteness is equivalent to all pivots being nonnegative with any
// zero pivot heading an all-zero residual column.  Returns nullopt if a
// pivot's sign cannot be decided (cannot happen for Hermitian input, kept as
// a guard).
template <class F>
std::optional<bool> exact_psd(std::vector<std::vector<typename F::scalar>> a) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto piv = a[k][k];
    if (!exact_is_real(piv)) return std::nullopt;
    const int sign = exact_real_sign(piv);
    if (sign < 0) return false;
    if (sign == 0) {
      for (std::size_t i = k + 1; i < n; ++i)
        if (!a[i][k].is_zero()) return false;
      continue;
    }
    const auto piv_inv = piv.inv();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k].is_zero()) continue;
      const auto factor = a[i][k] * piv_inv;
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = a[i][j] - factor * a[k][j];
    }
  }
  return true;
}

}  // namespace detail

// Positivity test for a Gram matrix.  Exact scalars get an arithmetic
// certificate via pivoted elimination; floating-point input is judged by the
// spectrum with the decomposition residual folded in as margin, so a pass
// means the true smallest eigenvalue clears -tol.
template <class F>
PsdCheckResult psd_check(const F& f, const typename RewriteSystem<F>::Gram& g, double tol) {
  (void)f;
  const std::size_t n = g.entries.size();
  for (const auto& row : g.entries)
    if (row.size() != n) throw operator_error("Gram matrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (F::exact) {
        if (!(g.entries[i][j] == qstar::conj(g.entries[j][i])))
          throw operator_error("Gram matrix is not Hermitian");
      } else {
        auto d = detail::to_c(g.entries[i][j]) - std::conj(detail::to_c(g.entries[j][i]));
        if (std::abs(d) > 1e-12) throw operator_error("Gram matrix is not Hermitian");
      }
    }

  PsdCheckResult out;
  if (n == 0) {
    out.exact_certified = F::exact;
    out.pass = true;
    return out;
  }

  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = detail::to_c(g.entries[i][j]);
  // Symmetrize away the last-bit noise the entrywise check already bounded.
  ComplexMatrix h = (m + m.adjoint()) / 2.0;
  auto spec = hermitian_spectrum(h);
  out.min_eigenvalue = spec.eigenvalues(0);
  out.margin = spec.decomposition_residual;

  if constexpr (F::exact) {
    auto verdict = detail::exact_psd<F>(g.entries);
    if (verdict) {
      out.exact_certified = true;
      out.pass = *verdict;
      return out;
    }
  }
  out.pass = out.min_eigenvalue - out.margin >= -tol;
  return out;
}

// Basis of the solution space of the homogeneous system lam * A_i = B_i * lam
// over all constraint pairs, obtained as the null space of the accumulated
// normal matrix.  Defects carry the constraint norm of each basis element so
// callers can see how sharply the cut separated solutions from
// non-solutions.
struct IntertwinerBasis {
  std::vector<ComplexMatrix> basis;  // each dim(B) x dim(A)
  std::vector<double> defects;
  double cut = 0.0;
};

template <class F>
IntertwinerBasis solve_intertwiner_system(
    const std::vector<std::pair<const TruncatedOperator<F>*, const TruncatedOperator<F>*>>&
        pairs,
    std::size_t dim_a, std::size_t dim_b) {
  const std::size_t big = dim_a * dim_b;
  if (big == 0) throw config_error("intertwiner system needs nonempty spaces");
  if (big > 2048)
    throw config_error("intertwiner system has " + std::to_string(big) +
                       " unknowns; the dense solver is capped at 2048");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(big, big);
  Eigen::MatrixXcd m(big, big);
  // vec(lam) index: i + dim_b * j for lam(i, j), i over B, j over A.
  for (const auto& [pa, pb] : pairs) {
    const auto& a = *pa;
    const auto& b = *pb;
    if (a.dim() != dim_a || b.dim() != dim_b)
      throw config_error("constraint dimensions do not match the declared spaces");
    m.setZero();
    for (std::size_t k = 0; k < dim_a; ++k)
      for (const auto& [j, av] : a.row(k))  // (lam a)(i, j) draws lam(i, k) a(k, j)
        for (std::size_t i = 0; i < dim_b; ++i) m(i + dim_b * j, i + dim_b * k) += detail::to_c(av);
    for (std::size_t i = 0; i < dim_b; ++i)
      for (const auto& [k, bv] : b.row(i))  // (b lam)(i, j) draws b(i, k) lam(k, j)
        for (std::size_t j = 0; j < dim_a; ++j) m(i + dim_b * j, k + dim_b * j) -= detail::to_c(bv);
    h += (m.adjoint() * m).eval();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw operator_error("eigensolver failed on the normal matrix");
  IntertwinerBasis out;
  const double lmax = es.eigenvalues()(Eigen::Index(big) - 1);
  out.cut = 1e-12 * std::max(1.0, lmax);
  for (Eigen::Index v = 0; v < Eigen::Index(big); ++v) {
    const double lam = es.eigenvalues()(v);
    if (lam > out.cut) break;  // ascending order: all solutions come first
    ComplexMatrix mat(dim_b, dim_a);
    for (std::size_t j = 0; j < dim_a; ++j)
      for (std::size_t i = 0; i < dim_b; ++i) mat(i, j) = es.eigenvectors()(Eigen::Index(i + dim_b * j), v);
    out.basis.push_back(std::move(mat));
    out.defects.push_back(std::sqrt(std::max(lam, 0.0)));
  }
  return out;
}

// Morphism space between two models of the same relation family: solutions
// lam with lam * pi_A(x) = pi_B(x) * lam for every generator and every
// generator adjoint.  Extra non-alphabet operators stored under the same name
// on both sides (coupled contractions, say) are constrained too.
template <class F>
IntertwinerBasis solve_intertwiners(const GeneratorSet<F>& ga, const GeneratorSet<F>& gb) {
  if (ga.relations.family() != gb.relations.family())
    throw config_error("intertwiner solving needs the same relation family on both sides");
  std::vector<TruncatedOperator<F>> held;  // keeps op_adjoint temporaries alive
  const auto& alpha = *ga.relations.alphabet();
  held.reserve(2 * alpha.size());
  std::vector<std::pair<const TruncatedOperator<F>*, const TruncatedOperator<F>*>> pairs;
  for (std::size_t g = 0; g < alpha.size(); ++g) {
    const auto& name = alpha.name(g);
    pairs.emplace_back(&ga.op(name), &gb.op(name));
    held.push_back(ga.op_adjoint(name));
    held.push_back(gb.op_adjoint(name));
    pairs.emplace_back(&held[held.size() - 2], &held[held.size() - 1]);
  }
  for (const auto& [name, op] : ga.ops) {
    if (alpha.index(name)) continue;
    auto it = gb.ops.find(name);
    if (it != gb.ops.end()) pairs.emplace_back(&op, &it->second);
  }
  return solve_intertwiner_system<F>(pairs, ga.space->size(), gb.space->size());
}

// Decides whether an operator on a tensor-pair space acts on the left factor
// only.  The candidate left factor is the normalized partial trace over the
// right factor; pass means the operator equals factor (x) identity up to the
// tolerance, relative to the operator's own size.
struct TensorFactorResult {
  bool pass = false;
  double distance = 0.0;
  ComplexMatrix factor;
};

template <class F>
TensorFactorResult tensor_factor_check(const TruncatedOperator<F>& lam, double tol) {
  const auto& sp = lam.space();
  if (sp->kind() != SpaceKind::TensorPair)
    throw operator_error("factor check needs an operator on a tensor-pair space");
  const std::size_t nl = sp->left()->size();
  const std::size_t nr = sp->right()->size();
  TensorFactorResult out;
  out.factor = ComplexMatrix::Zero(nl, nl);
  for (std::size_t r = 0; r < lam.dim(); ++r) {
    auto [i, j] = sp->pair_at(r);
    for (const auto& [c, v] : lam.row(r)) {
      auto [i2, j2] = sp->pair_at(c);
      if (j == j2) out.factor(i, i2) += detail::to_c(v);
    }
  }
  out.factor /= double(nr);
  double dist2 = 0.0;
  for (std::size_t j = 0; j < nr; ++j)
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t i2 = 0; i2 < nl; ++i2) {
        auto d = detail::to_c(lam.entry(sp->pair_index(i, j), sp->pair_index(i2, j))) -
                 out.factor(i, i2);
        dist2 += std::norm(d);
      }
  for (std::size_t r = 0; r < lam.dim(); ++r) {
    auto [i, j] = sp->pair_at(r);
    (void)i;
    for (const auto& [c, v] : lam.row(r)) {
      auto [i2, j2] = sp->pair_at(c);
      (void)i2;
      if (j != j2) dist2 += std::norm(detail::to_c(v));
    }
  }
  out.distance = std::sqrt(dist2);
  out.pass = out.distance <= tol * std::max(1.0, frobenius_norm(lam));
  return out;
}

// The three constructions a morphism can ride along: the shift-block models
// and the free-product coupling put the coefficient space on the right tensor
// factor (transport is 1 (x) lam), the pairs built from a coupled contraction
// put it on the left (transport is lam (x) 1).
enum class TransportKind { block_model, free_product, wild };

template <class F>
struct TransportResult {
  TruncatedOperator<F> transported;
  VerificationReport report;
};

// Pushes a morphism of the coefficient model through to the constructed
// model and verifies the transported operator commutes with every stored
// generator of the target.  The source intertwining property is pre-checked
// on all stored source operators and the generator adjoints; anything above
// the tolerance aborts, because transporting a non-morphism would not mean
// anything.  Injectivity of the transport is reported as an exact structural
// item: a nonzero morphism never maps to zero.
template <class F>
TransportResult<F> intertwiner_transport(const TruncatedOperator<F>& lam,
                                         const GeneratorSet<F>& source,
                                         const GeneratorSet<F>& target, TransportKind kind,
                                         double tol) {
  const F& f = lam.field();
  if (!lam.space()->same(*source.space))
    throw operator_error("morphism must act on the source model's space");
  auto require_commutes = [&](const std::string& what, const TruncatedOperator<F>& x) {
    const double defect = spectral_upper_bound(lam * x - x * lam);
    if (defect > tol)
      throw operator_error("source intertwining violated at " + what + " (defect " +
                           detail::double_to_string(defect) + ")");
  };
  for (const auto& [name, op] : source.ops) require_commutes(name, op);
  const auto& alpha = *source.relations.alphabet();
  for (std::size_t g = 0; g < alpha.size(); ++g)
    require_commutes(alpha.name(g) + "*", source.op_adjoint(alpha.name(g)));

  const auto& tsp = target.space;
  if (tsp->kind() != SpaceKind::TensorPair)
    throw operator_error("transport target must live on a tensor-pair space");
  TruncatedOperator<F> moved = [&] {
    if (kind == TransportKind::wild) {
      if (!tsp->left()->same(*lam.space()))
        throw operator_error("target left factor must match the morphism's space");
      return tensor(lam, TruncatedOperator<F>::identity(f, tsp->right()), tsp);
    }
    return functor_F_morphism(lam, tsp);
  }();

  auto rep = detail::report_env(f, tsp);
  const int full = int(tsp->truncation());
  for (const auto& [name, g] : target.ops) {
    auto d = moved * g - g * moved;
    // Commutation with the transported operator holds as full matrices, not
    // just below a safe depth, so the item is checked at the whole window.
    CheckItem it;
    it.name = "transport commutes with " + name;
    it.depth = full;
    if constexpr (F::exact) {
      it.kind = "exact";
      it.exact_zero = d.is_zero();
      it.residual = spectral_upper_bound(d);
      it.pass = it.exact_zero;
    } else {
      it.kind = "numeric";
      it.residual = spectral_upper_bound(d);
      it.tolerance = tol;
      it.pass = it.residual <= tol;
    }
    rep.items.push_back(std::move(it));
  }
  CheckItem inj;
  inj.name = "transport preserves nonzero morphisms";
  inj.kind = "exact";
  inj.exact_zero = lam.is_zero() || !moved.is_zero();
  inj.depth = full;
  inj.pass = inj.exact_zero;
  rep.items.push_back(std::move(inj));
  return {std::move(moved), std::move(rep)};
}

// Norm identities |s2 s1 x| = |x| = |q|^{-1} ... in the two-generator model:
// for each sample vector the report carries |s2 s1 x| / |x| against 1 and
// |s2 s1 x| against |q| |s1 s2 x|.  Vectors must be supported at depths both
// products certify; norms are computed in floating point even on exact
// models, which the report notes.
template <class F>
VerificationReport isometry_norm_test(const GeneratorSet<F>& gs,
                                      const std::vector<std::vector<std::complex<double>>>& xs,
                                      double tol) {
  const auto& alpha = *gs.relations.alphabet();
  if (alpha.size() != 2) throw config_error("norm test needs a two-generator model");
  const std::string n1 = alpha.name(0);
  const std::string n2 = alpha.name(1);
  auto m21 = gs.op(n2) * gs.op(n1);
  auto m12 = gs.op(n1) * gs.op(n2);
  const int safe = std::min(m21.valid_depth(), m12.valid_depth());
  if (safe < 0) throw operator_error("composed generators have no certified depth");
  const double mod_q = std::abs(gs.relations.field().q_complex());
  auto rep = detail::report_env(gs.relations.field(), gs.space);
  rep.notes.push_back("norm identities are evaluated in floating point even on exact models");
  const auto norm2 = [](const std::vector<std::complex<double>>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
  };
  std::size_t idx = 0;
  for (const auto& x : xs) {
    ++idx;
    const std::string tag = " (vector " + std::to_string(idx) + ")";
    if (x.size() != gs.space->size())
      throw operator_error("sample vector has the wrong dimension");
    const double nx = norm2(x);
    if (nx == 0.0) throw operator_error("zero vector rejected" + tag);
    int support = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != std::complex<double>(0.0, 0.0)) support = std::max(support, gs.space->level(i));
    if (support > safe)
      throw operator_error("sample vector reaches level " + std::to_string(support) +
                           " beyond the certified depth " + std::to_string(safe));
    const double na = norm2(apply_complex(m21, x));
    const double nb = norm2(apply_complex(m12, x));
    CheckItem one;
    one.name = "|" + n2 + " " + n1 + " x| = |x|" + tag;
    one.kind = "numeric";
    one.residual = std::abs(na / nx - 1.0);
    one.depth = support;
    one.tolerance = tol;
    one.pass = one.residual <= tol;
    rep.items.push_back(std::move(one));
    CheckItem two;
    two.name = "|" + n2 + " " + n1 + " x| = |q| |" + n1 + " " + n2 + " x|" + tag;
    two.kind = "numeric";
    two.residual = std::abs(na - mod_q * nb) / nx;
    two.depth = support;
    two.tolerance = tol;
    two.pass = two.residual <= tol;
    rep.items.push_back(std::move(two));
  }
  return rep;
}

// Fault-injection helper: returns a copy of the model with one stored entry
// of the named generator nudged by delta, chosen at a column the validity
// metadata still covers, so every downstream residual must react.
template <class F>
GeneratorSet<F> perturb_generator(GeneratorSet<F> gs, const std::string& name,
                                  const typename F::scalar& delta) {
  auto it = gs.ops.find(name);
  if (it == gs.ops.end()) throw config_error("model has no generator named " + name);
  auto& op = it->second;
  const int vd = std::max(op.valid_depth(), 0);
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (const auto& [c, v] : op.row(r))
      if (op.space()->level(c) <= vd) {
        op.set_entry(r, c, v + delta);
        return gs;
      }
  throw operator_error("no stored entry lies at a certified depth");
}

}  // namespace qstar
