#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qstar/parser.hpp"
#include "qstar/printer.hpp"
#include "qstar/representations.hpp"
#include "qstar/transforms.hpp"
#include "qstar/verification.hpp"

namespace qstar {

// One run's worth of knobs, shared by every subcommand.  q stays a string
// until after parsing so exact values never pass through a double first.
struct SessionConfig {
  std::string q_text = "1/2";
  std::string mode;  // "", "exact", or "float"; empty picks per the q value
  std::size_t L = 4;
  std::size_t N = 3;
  double tolerance = 1e-10;
  std::string format = "json";
  std::uint64_t seed = 20260823;
  std::string out;
};

inline constexpr std::size_t kMaxLevel = 8;
inline constexpr std::size_t kMaxOrder = 12;

namespace detail {

// Accepts "1/2", "-3/5", "0.9", "i", "3+4i", "(3+4i)/5".  A decimal point
// anywhere marks the value as float-intended; the numeric value is still
// carried exactly (0.9 reads as 9/10) so exact mode can be forced on it.
inline GaussianRational parse_q_text(const std::string& raw, bool& saw_decimal) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  saw_decimal = s.find('.') != std::string::npos;
  if (s.empty()) throw config_error("empty q value");
  std::string body = s;
  BigRat denom(1);
  if (s.front() == '(') {
    auto close = s.rfind(')');
    if (close == std::string::npos)
      throw config_error("unbalanced parenthesis in q value '" + raw + "'");
    body = s.substr(1, close - 1);
    std::string rest = s.substr(close + 1);
    if (!rest.empty()) {
      if (rest.front() != '/')
        throw config_error("expected '/' after ')' in q value '" + raw + "'");
      std::size_t pos = 0;
      std::string_view dsv(rest);
      dsv.remove_prefix(1);
      denom = parse_unsigned_rational(dsv, pos, saw_decimal);
      if (pos != dsv.size() || denom == 0)
        throw config_error("bad denominator in q value '" + raw + "'");
    }
  }
  GaussianRational acc;
  std::size_t i = 0;
  bool first = true;
  while (i < body.size()) {
    int sign = 1;
    if (body[i] == '+') {
      ++i;
    } else if (body[i] == '-') {
      sign = -1;
      ++i;
    } else if (!first) {
      throw config_error("expected '+' or '-' in q value '" + raw + "'");
    }
    if (i >= body.size()) throw config_error("dangling sign in q value '" + raw + "'");
    BigRat mag;
    bool imag = false;
    if (body[i] == 'i') {
      mag = 1;
      imag = true;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(body[i]))) {
      mag = parse_unsigned_rational(body, i, saw_decimal);
      if (i < body.size() && body[i] == 'i') {
        imag = true;
        ++i;
      }
    } else {
      throw config_error("unexpected character '" + std::string(1, body[i]) +
                         "' in q value '" + raw + "'");
    }
    if (sign < 0) mag = -mag;
    if (imag)
      acc.im += mag;
    else
      acc.re += mag;
    first = false;
  }
  if (first) throw config_error("empty q value");
  acc.re /= denom;
  acc.im /= denom;
  return acc;
}

struct ResolvedQ {
  bool exact = false;
  GaussianRational gq;
  std::complex<double> z;
};

// Mode choice: an explicit flag wins; otherwise decimal input runs float and
// everything else runs exact whenever the scalar field supports the value
// (perfect-square or radical regime).  The chosen mode is always reported.
inline ResolvedQ resolve_q(const SessionConfig& cfg) {
  bool saw_decimal = false;
  ResolvedQ r;
  r.gq = parse_q_text(cfg.q_text, saw_decimal);
  r.z = r.gq.to_complex();
  const auto supported = [&] {
    auto ctx = QContext::make(r.gq);
    return ctx->root().has_value() || ctx->radical_ok();
  };
  if (cfg.mode == "float") return r;
  if (cfg.mode == "exact") {
    if (!supported())
      throw config_error("exact mode unavailable for q = " + cfg.q_text +
                         ": neither 1-q^2 perfect square nor real radical regime");
    r.exact = true;
    return r;
  }
  r.exact = !saw_decimal && supported();
  return r;
}

// Runs fn with the field the mode resolution picked.
template <class Fn>
int with_field(const SessionConfig& cfg, Fn&& fn) {
  auto rq = resolve_q(cfg);
  if (rq.exact) return fn(make_exact_field(rq.gq));
  return fn(make_float_field(rq.z));
}

inline void emit_report(const SessionConfig& cfg, VerificationReport rep, std::ostream& out) {
  rep.q = cfg.q_text;  // echo the user's exact spelling
  std::string text;
  if (cfg.format == "json") {
    text = rep.to_json().dump(2) + "\n";
  } else {
    std::ostringstream ss;
    rep.write_text(ss);
    text = ss.str();
  }
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw config_error("cannot open output path '" + cfg.out + "'");
    f << text;
  } else {
    out << text;
  }
}

inline void emit_json(const SessionConfig& cfg, const nlohmann::ordered_json& j,
                      const std::string& text_form, std::ostream& out) {
  std::string text =
      cfg.format == "json" ? j.dump(2) + "\n" : text_form + "\n";
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw config_error("cannot open output path '" + cfg.out + "'");
    f << text;
  } else {
    out << text;
  }
}

template <class F>
RewriteSystem<F> family_by_name(const F& f, const std::string& rel, int k) {
  if (rel == "cuntz-toeplitz") return RewriteSystem<F>::cuntz_toeplitz2(f);
  if (rel == "deformed") return RewriteSystem<F>::deformed_cuntz2(f);
  if (rel == "q-commuting") return RewriteSystem<F>::q_commuting2(f);
  if (rel == "cuntz") return RewriteSystem<F>::cuntz2(f);
  if (rel == "o-infinity") return RewriteSystem<F>::o_infinity(f, k);
  throw config_error("unknown relation family '" + rel +
                     "'; expected cuntz-toeplitz, deformed, q-commuting, cuntz, "
                     "or o-infinity");
}

// Symbolic identity as a report item: exact mode demands literal zero, float
// mode bounds the l1 coefficient mass of the defect.  depth -1 marks the
// item as symbolic rather than evaluated on a truncation.
template <class F>
CheckItem poly_identity_item(std::string name, const StarPolynomial<F>& defect, double tol) {
  CheckItem it;
  it.name = std::move(name);
  it.depth = -1;
  it.residual = coefficient_l1(defect);
  if constexpr (F::exact) {
    it.kind = "exact";
    it.exact_zero = defect.is_zero();
    it.pass = it.exact_zero;
  } else {
    it.kind = "numeric";
    it.tolerance = tol;
    it.pass = it.residual <= tol;
  }
  return it;
}

// Deterministic uniform in [-1, 1] built from raw generator bits, so output
// does not depend on the standard library's distribution internals.
inline double canonical_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1p-52 - 1.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand bodies.  Each returns the process exit code: 0 all pass, 1 any
// failing check, 2 never (configuration trouble throws instead).

inline int cmd_normal_form(const SessionConfig& cfg, const std::string& rel, int k,
                           const std::string& expr, std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    auto rs = detail::family_by_name<F>(f, rel, k);
    auto p = parse_expression(f, rs.alphabet(), expr);
    auto printed = to_string(rs.normal_form(p));
    nlohmann::ordered_json j;
    j["environment"] = {{"q", cfg.q_text}, {"mode", F::exact ? "exact" : "float"},
                        {"relations", rel}};
    j["input"] = expr;
    j["normal_form"] = printed;
    detail::emit_json(cfg, j, printed, out);
    return 0;
  });
}

inline int cmd_gram(const SessionConfig& cfg, const std::string& rel, std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    auto rs = detail::family_by_name<F>(f, rel, 2);
    auto gram = rs.gram_matrix(cfg.L);
    auto res = psd_check(f, gram, cfg.tolerance);
    auto rep = detail::report_env(f, nullptr);
    rep.truncation = int(cfg.L);
    CheckItem it;
    it.name = "Gram matrix of level-" + std::to_string(cfg.L) + " words is positive";
    it.depth = int(cfg.L);
    if (res.exact_certified) {
      it.kind = "exact";
      it.exact_zero = res.pass;
      it.residual = std::max(0.0, -res.min_eigenvalue);
      it.pass = res.pass;
    } else {
      it.kind = "numeric";
      it.residual = std::max(0.0, -(res.min_eigenvalue - res.margin));
      it.tolerance = cfg.tolerance;
      it.pass = res.pass;
    }
    rep.items.push_back(std::move(it));
    rep.notes.push_back("smallest eigenvalue " +
                        detail::double_to_string(res.min_eigenvalue) +
                        (res.exact_certified ? " with exact pivot certificate"
                                             : " with spectral margin " +
                                                   detail::double_to_string(res.margin)));
    if constexpr (F::exact) {
      if (f.ctx->q().re == 0 && f.ctx->q().im == 0) {
        CheckItem id;
        id.name = "q = 0 Gram matrix is the identity";
        id.kind = "exact";
        id.depth = int(cfg.L);
        bool ok = true;
        for (std::size_t i = 0; i < gram.entries.size() && ok; ++i)
          for (std::size_t j = 0; j < gram.entries.size() && ok; ++j)
            ok = gram.entries[i][j] == (i == j ? f.one() : f.zero());
        id.exact_zero = ok;
        id.pass = ok;
        rep.items.push_back(std::move(id));
      }
    }
    const bool pass = rep.all_pass();
    detail::emit_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
  });
}

inline int cmd_lemmas(const SessionConfig& cfg, std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    using P = StarPolynomial<F>;
    auto rep = detail::report_env(f, nullptr);
    const double tol = cfg.tolerance;

    // orthogonal pair inside the deformed algebra
    auto ds = RewriteSystem<F>::deformed_cuntz2(f);
    auto g = lemma1_generators(f, ds.alphabet());
    auto one_d = P::one(f, ds.alphabet());
    rep.items.push_back(detail::poly_identity_item(
        "t1* t1 = 1 in the deformed algebra",
        ds.normal_form(g.t1.adjoint() * g.t1 - one_d), tol));
    rep.items.push_back(detail::poly_identity_item(
        "t2* t2 = 1 in the deformed algebra",
        ds.normal_form(g.t2.adjoint() * g.t2 - one_d), tol));
    rep.items.push_back(detail::poly_identity_item(
        "t1* t2 = 0 in the deformed algebra", ds.normal_form(g.t1.adjoint() * g.t2),
        tol));

    // partial-sum defects under the orthogonal relations
    auto os = RewriteSystem<F>::cuntz_toeplitz2(f);
    auto a = os.alphabet();
    auto one_o = P::one(f, a);
    auto s2n = lemma2_partial_sum(f, PartialSumSpec{cfg.N}, a);
    auto t1p = P::word(f, a, Word::gen(0, false, cfg.N + 1));
    auto t1m = P::word(f, a, Word::gen(0, true, cfg.N + 1));
    auto isom_defect = os.normal_form(
        s2n.adjoint() * s2n -
        (one_o - detail::scalar_pow(f, f.q(), 2 * cfg.N + 2) * (t1p * t1m)));
    rep.items.push_back(detail::poly_identity_item(
        "s2^(N)* s2^(N) = 1 - q^{2N+2} t1^{N+1} t1*^{N+1}", isom_defect, tol));
    auto t1s = P::generator(f, a, 0).adjoint();
    auto comm_defect = os.normal_form(
        t1s * s2n - f.q() * (s2n * t1s) +
        detail::scalar_pow(f, f.q(), cfg.N + 1) *
            (P::word(f, a, Word::gen(0, false, cfg.N)) * tilde_t2(f, a) * t1m));
    rep.items.push_back(detail::poly_identity_item(
        "t1* s2^(N) - q s2^(N) t1* = -q^{N+1} t1^N t~2 t1*^{N+1}", comm_defect, tol));

    rep.items.push_back(detail::poly_identity_item(
        "substituting s1 -> t1, s2 -> s2^(N) fixes the orthogonal pair",
        isomorphism_witness_defect(f, cfg.N), tol));

    rep.notes.push_back("series order N = " + std::to_string(cfg.N));
    const bool pass = rep.all_pass();
    detail::emit_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
  });
}

inline int cmd_roundtrip(const SessionConfig& cfg, std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    using P = StarPolynomial<F>;
    auto rep = detail::report_env(f, nullptr);
    auto ds = RewriteSystem<F>::deformed_cuntz2(f);
    auto a = ds.alphabet();
    auto defect = roundtrip_defect(f, cfg.N);
    auto closed = -detail::scalar_pow(f, f.q(), cfg.N + 1) *
                  (P::word(f, a, Word::gen(0, false, cfg.N + 1)) * P::generator(f, a, 1) *
                   P::word(f, a, Word::gen(0, true, cfg.N + 1)));
    rep.items.push_back(detail::poly_identity_item(
        "round-trip defect = -q^{N+1} s1^{N+1} s2 s1*^{N+1}",
        ds.normal_form(defect - closed), cfg.tolerance));
    auto g = lemma1_generators(f, a);
    auto tilde_sub = substitute(tilde_t2(f), {g.t1, g.t2});
    auto p1 = P::generator(f, a, 0) * P::generator(f, a, 0).adjoint();
    auto direct = (P::one(f, a) - p1) * P::generator(f, a, 1);
    rep.items.push_back(detail::poly_identity_item(
        "substituted t~2 = (1 - s1 s1*) s2", ds.normal_form(tilde_sub - direct),
        cfg.tolerance));
    rep.notes.push_back("series order N = " + std::to_string(cfg.N));
    rep.notes.push_back("defect normal form: " + to_string(ds.normal_form(defect)));
    const bool pass = rep.all_pass();
    detail::emit_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
  });
}

inline int cmd_qcun_check(const SessionConfig& cfg, std::size_t coeff_level,
                          std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    auto pi_u = fock_o_infinity(f, int(cfg.L), coeff_level);
    auto qcun = build_qcun(pi_u, cfg.L);
    auto rep = check_relations(qcun, int(qcun.space->truncation()), cfg.tolerance);

    auto cun = build_cun(pi_u, cfg.L);
    auto g = lemma1_generators(f, qcun.relations.alphabet());
    auto m1 = evaluate(qcun, g.t1);
    auto m2 = evaluate(qcun, g.t2);
    auto d1 = m1 - cun.op("t1");
    auto d2 = m2 - cun.op("t2");
    int depth1 = std::min(d1.valid_depth(), cun.op("t1").valid_depth());
    int depth2 = std::min(d2.valid_depth(), cun.op("t2").valid_depth());
    if (depth1 < 0 || depth2 < 0)
      throw operator_error("no certified depth for the block transform comparison");
    rep.items.push_back(
        detail::residual_item("transformed s1 matches the undeformed block model", d1,
                              depth1, cfg.tolerance));
    rep.items.push_back(
        detail::residual_item("transformed s2 matches the undeformed block model", d2,
                              depth2, cfg.tolerance));
    rep.notes.push_back("coefficient model: " + std::to_string(cfg.L) +
                        " word generators at truncation " + std::to_string(coeff_level));
    const bool pass = rep.all_pass();
    detail::emit_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
  });
}

inline int cmd_wild_check(const SessionConfig& cfg, std::size_t blocks, std::ostream& out) {
  return detail::with_field(cfg, [&](auto f) {
    using F = decltype(f);
    auto pair = fock_cuntz_toeplitz(f, 2, cfg.L);
    auto sp = pair.space;
    auto c = TruncatedOperator<F>::zero(f, sp);
    for (std::size_t i = 0; i < sp->size(); ++i)
      c.set_entry(i, i, i % 2 == 0 ? f.from_rat(BigRat(3, 5)) : f.from_rat(BigRat(4, 5)));
    auto wild = build_wild_rep(pair.op("t1"), pair.op("t2"), c, blocks);
    auto rep = check_relations(wild.gens, int(wild.gens.space->truncation()),
                               cfg.tolerance);
    rep.notes.push_back(wild.note);

    const auto& wsp = wild.gens.space;
    auto m21 = wild.gens.op("s2") * wild.gens.op("s1");
    auto m12 = wild.gens.op("s1") * wild.gens.op("s2");
    const int safe = std::min(m21.valid_depth(), m12.valid_depth());
    if (safe < 0) throw operator_error("no certified depth for the norm identities");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<std::complex<double>>> samples;
    for (int s = 0; s < 3; ++s) {
      std::vector<std::complex<double>> x(wsp->size(), 0.0);
      for (std::size_t i = 0; i < wsp->size(); ++i)
        if (wsp->level(i) <= safe)
          x[i] = std::complex<double>(detail::canonical_double(rng),
                                      detail::canonical_double(rng));
      samples.push_back(std::move(x));
    }
    rep.merge(isometry_norm_test(wild.gens, samples, cfg.tolerance));
    const bool pass = rep.all_pass();
    detail::emit_report(cfg, std::move(rep), out);
    return pass ? 0 : 1;
  });
}

namespace detail {

// Multiplicity-two coefficient material for the transport demonstrations:
// generators act on the word leg of aux (x) words, so left-leg matrices form
// the commutant.
inline GeneratorSet<FloatField> transport_source(const FloatField& f, RelationFamily fam,
                                                 std::size_t fock_level) {
  auto rs = [&] {
    switch (fam) {
      case RelationFamily::OInfinity: return RewriteSystem<FloatField>::o_infinity(f, 2);
      case RelationFamily::Cuntz2: return RewriteSystem<FloatField>::cuntz2(f);
      default: return RewriteSystem<FloatField>::cuntz_toeplitz2(f);
    }
  }();
  auto aux = GradedSpace::natural_numbers(1);
  auto fock = GradedSpace::fock_words(2, fock_level);
  auto sp = GradedSpace::tensor_pair(aux, fock);
  GeneratorSet<FloatField> out{std::move(rs), sp, {}, {}};
  auto cre = creation_ops(f, fock);
  auto ida = TruncatedOperator<FloatField>::identity(f, aux);
  for (std::size_t g = 0; g < 2; ++g)
    out.ops.emplace(out.relations.alphabet()->name(g), tensor(ida, cre[g], sp));
  return out;
}

}  // namespace detail

inline int cmd_intertwine(const SessionConfig& cfg, const std::string& functor,
                          std::size_t count, std::ostream& out) {
  // Commutant solving and the random morphism supply are floating-point by
  // nature, so this command always runs in float mode; exact q text is still
  // honored as a value.
  auto rq = detail::resolve_q(cfg);
  auto f = make_float_field(rq.z);
  const std::size_t fock_level = std::min<std::size_t>(cfg.L, 3);

  TransportKind kind;
  GeneratorSet<FloatField> source = [&] {
    if (functor == "cun") {
      kind = TransportKind::block_model;
      return detail::transport_source(f, RelationFamily::OInfinity, fock_level);
    }
    if (functor == "free") {
      kind = TransportKind::free_product;
      return detail::transport_source(f, RelationFamily::Cuntz2, fock_level);
    }
    if (functor == "wild") {
      kind = TransportKind::wild;
      auto src = detail::transport_source(f, RelationFamily::CuntzToeplitz2, fock_level);
      auto right = src.space->right();
      auto d = TruncatedOperator<FloatField>::zero(f, right);
      for (std::size_t i = 0; i < right->size(); ++i)
        d.set_entry(i, i, f.from_rat(i % 2 == 0 ? BigRat(3, 5) : BigRat(4, 5)));
      src.ops.emplace("c", tensor(TruncatedOperator<FloatField>::identity(
                                      f, src.space->left()),
                                  d, src.space));
      return src;
    }
    throw config_error("unknown functor '" + functor + "'; expected cun, free, or wild");
  }();

  GeneratorSet<FloatField> target = [&] {
    if (kind == TransportKind::block_model) return build_qcun(source, 2);
    if (kind == TransportKind::free_product) {
      auto h = GradedSpace::natural_numbers(2);
      auto c1 = TruncatedOperator<FloatField>::zero(f, h);
      auto c2 = TruncatedOperator<FloatField>::zero(f, h);
      for (std::size_t i = 0; i < h->size(); ++i) {
        c1.set_entry(i, i, f.from_rat(BigRat(3, 5)));
        c2.set_entry(i, i, f.from_rat(BigRat(4, 5)));
      }
      return build_free_product_rep(c1, c2, source);
    }
    auto wild = build_wild_rep(source.op("t1"), source.op("t2"), source.ops.at("c"), 2);
    return std::move(wild.gens);
  }();

  auto sol = solve_intertwiners(source, source);
  auto rep = detail::report_env(f, target.space);
  rep.notes.push_back("commutant dimension " + std::to_string(sol.basis.size()) +
                      " on the truncated source (enlarged commutants at finite "
                      "truncation are expected)");
  bool all_factor = true;
  for (const auto& m : sol.basis)
    all_factor =
        all_factor && tensor_factor_check(operator_from_dense(f, source.space, m), 1e-8).pass;
  rep.notes.push_back(std::string("commutant basis confined to the auxiliary leg: ") +
                      (all_factor ? "yes" : "no"));

  std::mt19937_64 rng(cfg.seed);
  for (std::size_t j = 0; j < count; ++j) {
    ComplexMatrix m = ComplexMatrix::Zero(source.space->size(), source.space->size());
    for (const auto& b : sol.basis)
      m += std::complex<double>(detail::canonical_double(rng),
                                detail::canonical_double(rng)) *
           b;
    auto lam = operator_from_dense(f, source.space, m);
    auto moved = intertwiner_transport(lam, source, target, kind, cfg.tolerance);
    for (auto& it : moved.report.items) {
      it.name = "morphism " + std::to_string(j + 1) + ": " + it.name;
      rep.items.push_back(std::move(it));
    }
  }
  const bool pass = rep.all_pass();
  detail::emit_report(cfg, std::move(rep), out);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

// Parses argv-style arguments (excluding the program name) and runs one
// subcommand.  Reports go to `out`; usage and configuration complaints go to
// `err`.  Exit code contract: 0 all checks passed, 1 some check failed,
// 2 configuration or usage error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"workbench for pairs of q-commuting isometries"};
  app.require_subcommand(1);

  SessionConfig cfg;
  std::string rel = "deformed";
  int oinf_k = 2;
  std::string expr;
  std::size_t coeff_level = 2;
  std::size_t blocks = 4;
  std::string functor = "cun";
  std::size_t count = 5;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--q", cfg.q_text,
                    "deformation parameter as exact text, e.g. \"1/2\" or \"(3+4i)/5\"")
        ->capture_default_str();
    sub->add_option("--mode", cfg.mode, "force arithmetic mode: exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tolerance", cfg.tolerance, "numeric pass threshold")
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "write the report to this path instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for deterministic sample vectors")
        ->capture_default_str();
  };

  auto* nf = app.add_subcommand("normal-form", "rewrite an expression to normal order");
  add_common(nf);
  nf->add_option("--rel", rel,
                 "relation family: cuntz-toeplitz, deformed, q-commuting, cuntz, "
                 "o-infinity")
      ->capture_default_str();
  nf->add_option("--k", oinf_k, "generator count for the o-infinity family")
      ->capture_default_str();
  nf->add_option("expression", expr, "expression to rewrite")->required();

  auto* gr = app.add_subcommand("gram", "positivity of the word Gram matrix");
  add_common(gr);
  gr->add_option("--level", cfg.L, "maximal word length")->capture_default_str();
  gr->add_option("--rel", rel, "relation family with a vacuum form")
      ->capture_default_str();

  auto* lm = app.add_subcommand("lemmas", "symbolic identities behind the isomorphism");
  add_common(lm);
  lm->add_option("--order", cfg.N, "series truncation order N")->capture_default_str();

  auto* rt = app.add_subcommand("roundtrip",
                                "substitute the series back and report the defect");
  add_common(rt);
  rt->add_option("--order", cfg.N, "series truncation order N")->capture_default_str();

  auto* qc = app.add_subcommand("qcun-check",
                                "residuals of the deformed block matrix model");
  add_common(qc);
  qc->add_option("--level", cfg.L, "block count (also the coefficient supply)")
      ->capture_default_str();
  qc->add_option("--coeff-level", coeff_level, "coefficient word truncation")
      ->capture_default_str();

  auto* wc = app.add_subcommand("wild-check",
                                "residuals and norm identities of the coupled pair");
  add_common(wc);
  wc->add_option("--level", cfg.L, "word truncation of the coefficient pair")
      ->capture_default_str();
  wc->add_option("--blocks", blocks, "sequence-space truncation")->capture_default_str();

  auto* iw = app.add_subcommand("intertwine",
                                "solve the source commutant and transport it");
  add_common(iw);
  iw->add_option("--level", cfg.L, "word truncation of the source leg")
      ->capture_default_str();
  iw->add_option("--functor", functor, "construction to ride: cun, free, wild")
      ->check(CLI::IsMember({"cun", "free", "wild"}))
      ->capture_default_str();
  iw->add_option("--count", count, "number of random morphisms")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.L > kMaxLevel)
      throw config_error("truncation level " + std::to_string(cfg.L) + " exceeds the cap " +
                         std::to_string(kMaxLevel));
    if (cfg.N > kMaxOrder)
      throw config_error("series order " + std::to_string(cfg.N) + " exceeds the cap " +
                         std::to_string(kMaxOrder));
    if (nf->parsed()) return cmd_normal_form(cfg, rel, oinf_k, expr, out);
    if (gr->parsed()) return cmd_gram(cfg, rel, out);
    if (lm->parsed()) return cmd_lemmas(cfg, out);
    if (rt->parsed()) return cmd_roundtrip(cfg, out);
    if (qc->parsed()) return cmd_qcun_check(cfg, coeff_level, out);
    if (wc->parsed()) return cmd_wild_check(cfg, blocks, out);
    if (iw->parsed()) return cmd_intertwine(cfg, functor, count, out);
    err << "no subcommand selected\n";
    return 2;
  } catch (const qstar_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qstar
