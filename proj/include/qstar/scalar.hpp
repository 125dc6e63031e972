#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qstar/gaussian.hpp"

namespace qstar {

enum class ScalarKind { Exact, Float };

struct ScalarMode {
  ScalarKind kind = ScalarKind::Exact;
  int precision = 53;  // only double precision is supported
};

// Fixed deformation parameter and the data needed to work in
// Q(i)(r) with r^2 = 1 - q^2.
//
// Three regimes, decided once at construction:
//   * 1 - q^2 is a perfect square rho^2 in Q(i): every scalar folds its
//     radical part into the rational part (b is always 0), so equality and
//     inversion stay exact.  Covers q = 3/5, q = +-1, q = (3+4i)/5.
//   * q real with 0 < 1 - q^2 not a square: scalars are faithful (a, b)
//     pairs; r is the nonnegative real root.  Covers q = 1/2.
//   * anything else: only b = 0 scalars are representable; complex-q
//     deformed work belongs in float mode.
class QContext {
 public:
  static std::shared_ptr<const QContext> make(GaussianRational q) {
    auto ctx = std::shared_ptr<QContext>(new QContext);
    ctx->q_ = std::move(q);
    ctx->omqq_ = GaussianRational(1) - ctx->q_ * ctx->q_;
    ctx->root_ = gaussian_sqrt(ctx->omqq_);
    ctx->radical_ok_ =
        !ctx->root_ && ctx->q_.is_real() && ctx->omqq_.is_real() && ctx->omqq_.re > 0;
    if (ctx->radical_ok_) {
      ctx->r_float_ = std::sqrt(rat_to_double(ctx->omqq_.re));
    } else if (ctx->root_) {
      ctx->r_float_ = 0.0;  // unused: radical part always folds away
    }
    return ctx;
  }

  const GaussianRational& q() const { return q_; }
  const GaussianRational& one_minus_q_sq() const { return omqq_; }
  const std::optional<GaussianRational>& root() const { return root_; }
  bool radical_ok() const { return radical_ok_; }
  double r_float() const { return r_float_; }
  bool same(const QContext& other) const { return q_ == other.q_; }

 private:
  QContext() = default;
  GaussianRational q_;
  GaussianRational omqq_;
  std::optional<GaussianRational> root_;
  bool radical_ok_ = false;
  double r_float_ = 0.0;
};

// a + b r over a fixed QContext.  Immutable value type; all arithmetic
// canonicalizes so that equality is structural.
class ExactScalar {
 public:
  ExactScalar() = default;  // contextless zero placeholder, only for containers

  static ExactScalar make(std::shared_ptr<const QContext> ctx, GaussianRational a,
                          GaussianRational b = {}) {
    ExactScalar s;
    s.ctx_ = std::move(ctx);
    s.a_ = std::move(a);
    s.b_ = std::move(b);
    s.canonicalize();
    return s;
  }

  const std::shared_ptr<const QContext>& ctx() const { return ctx_; }
  const GaussianRational& a() const { return a_; }
  const GaussianRational& b() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
    auto c = merged_ctx(x, y);
    return make(c, x.a_ + y.a_, x.b_ + y.b_);
  }
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
    auto c = merged_ctx(x, y);
    return make(c, x.a_ - y.a_, x.b_ - y.b_);
  }
  ExactScalar operator-() const {
    ExactScalar s = *this;
    s.a_ = -s.a_;
    s.b_ = -s.b_;
    return s;
  }
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
    auto c = merged_ctx(x, y);
    if (!c) return make(nullptr, x.a_ * y.a_);  // both contextless zeros
    const GaussianRational& R = c->one_minus_q_sq();
    return make(c, x.a_ * y.a_ + x.b_ * y.b_ * R, x.a_ * y.b_ + x.b_ * y.a_);
  }

  // (a + b r)^-1 = (a - b r) / (a^2 - b^2 (1 - q^2)).  The denominator can
  // vanish for nonzero input only when 1 - q^2 is a square, and those
  // contexts never store b != 0.
  ExactScalar inv() const {
    if (is_zero()) throw qstar_error("division by zero");
    if (b_.is_zero()) return make(ctx_, a_.inv());
    GaussianRational d = a_ * a_ - b_ * b_ * ctx_->one_minus_q_sq();
    if (d.is_zero()) throw qstar_error("division by zero");
    GaussianRational di = d.inv();
    return make(ctx_, a_ * di, -b_ * di);
  }

  // Conjugation fixes r: radical contexts have real q, where r is the real
  // nonnegative root.
  ExactScalar conj() const {
    ExactScalar s = *this;
    s.a_ = s.a_.conj();
    s.b_ = s.b_.conj();
    return s;
  }

  friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
    merged_ctx(x, y);  // reject context mixing even in comparisons
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }

  std::complex<double> to_complex() const {
    std::complex<double> v = a_.to_complex();
    if (!b_.is_zero()) v += b_.to_complex() * ctx_->r_float();
    return v;
  }

  // Square root inside Q(i)(r) when one exists.  Tries a rational-part root
  // first, then a pure-radical root, then the mixed (u + v r) solution of
  // u^2 + v^2 (1-q^2) = a, 2uv = b.
  std::optional<ExactScalar> sqrt_opt() const {
    if (is_zero()) return make(ctx_, GaussianRational{});
    const GaussianRational& R = ctx_ ? ctx_->one_minus_q_sq() : GaussianRational(1);
    if (b_.is_zero()) {
      if (auto u = gaussian_sqrt(a_)) return make(ctx_, *u);
      if (ctx_ && ctx_->radical_ok()) {
        if (auto v = gaussian_sqrt(a_ / R)) return make(ctx_, GaussianRational{}, *v);
      }
      return std::nullopt;
    }
    GaussianRational disc = a_ * a_ - b_ * b_ * R;
    auto s = gaussian_sqrt(disc);
    if (!s) return std::nullopt;
    for (const GaussianRational& u2 : {(a_ + *s) / 2, (a_ - *s) / 2}) {
      auto u = gaussian_sqrt(u2);
      if (!u || u->is_zero()) continue;
      GaussianRational v = b_ / (GaussianRational(2) * *u);
      ExactScalar cand = make(ctx_, *u, v);
      if (cand * cand == *this) return cand;
    }
    return std::nullopt;
  }

 private:
  void canonicalize() {
    if (b_.is_zero() || !ctx_) {
      if (!b_.is_zero()) throw mode_error("radical scalar requires a q-context");
      return;
    }
    if (ctx_->root()) {
      a_ = a_ + b_ * *ctx_->root();
      b_ = GaussianRational{};
      return;
    }
    if (!ctx_->radical_ok())
      throw mode_error("r = (1-q^2)^{1/2} is not exactly representable for q = " +
                       gauss_to_string(ctx_->q()) + "; use float mode");
  }

  static std::shared_ptr<const QContext> merged_ctx(const ExactScalar& x,
                                                    const ExactScalar& y) {
    if (!x.ctx_) return y.ctx_;
    if (!y.ctx_) return x.ctx_;
    if (x.ctx_ == y.ctx_ || x.ctx_->same(*y.ctx_)) return x.ctx_;
    throw context_error("mixing scalars from different q-contexts (q = " +
                        gauss_to_string(x.ctx_->q()) + " vs q = " +
                        gauss_to_string(y.ctx_->q()) + ")");
  }

  std::shared_ptr<const QContext> ctx_;
  GaussianRational a_;
  GaussianRational b_;
};

inline ExactScalar conj(const ExactScalar& x) { return x.conj(); }

// Float-mode twin of QContext.  For complex q the float reading of r is
// (1 - |q|^2)^{1/2}; for real q this coincides with the exact convention.
struct FloatContext {
  std::complex<double> q;
  double r = 0.0;

  static std::shared_ptr<const FloatContext> make(std::complex<double> q) {
    auto ctx = std::make_shared<FloatContext>();
    ctx->q = q;
    double m = 1.0 - std::norm(q);
    ctx->r = m > 0 ? std::sqrt(m) : 0.0;
    return ctx;
  }
};

class FloatScalar {
 public:
  FloatScalar() = default;

  static FloatScalar make(std::shared_ptr<const FloatContext> ctx, std::complex<double> v) {
    FloatScalar s;
    s.ctx_ = std::move(ctx);
    s.v_ = v;
    return s;
  }

  const std::shared_ptr<const FloatContext>& ctx() const { return ctx_; }
  std::complex<double> value() const { return v_; }
  bool is_zero() const { return v_ == 0.0; }

  friend FloatScalar operator+(const FloatScalar& x, const FloatScalar& y) {
    return make(merged_ctx(x, y), x.v_ + y.v_);
  }
  friend FloatScalar operator-(const FloatScalar& x, const FloatScalar& y) {
    return make(merged_ctx(x, y), x.v_ - y.v_);
  }
  FloatScalar operator-() const { return make(ctx_, -v_); }
  friend FloatScalar operator*(const FloatScalar& x, const FloatScalar& y) {
    return make(merged_ctx(x, y), x.v_ * y.v_);
  }
  FloatScalar inv() const {
    if (is_zero()) throw qstar_error("division by zero");
    return make(ctx_, 1.0 / v_);
  }
  FloatScalar conj() const { return make(ctx_, std::conj(v_)); }

  friend bool operator==(const FloatScalar& x, const FloatScalar& y) {
    merged_ctx(x, y);
    return x.v_ == y.v_;
  }
  friend bool operator!=(const FloatScalar& x, const FloatScalar& y) { return !(x == y); }

  std::complex<double> to_complex() const { return v_; }

  std::optional<FloatScalar> sqrt_opt() const { return make(ctx_, std::sqrt(v_)); }

 private:
  static std::shared_ptr<const FloatContext> merged_ctx(const FloatScalar& x,
                                                        const FloatScalar& y) {
    if (!x.ctx_) return y.ctx_;
    if (!y.ctx_) return x.ctx_;
    if (x.ctx_ == y.ctx_ || x.ctx_->q == y.ctx_->q) return x.ctx_;
    throw context_error("mixing scalars from different q-contexts");
  }

  std::shared_ptr<const FloatContext> ctx_;
  std::complex<double> v_{0.0, 0.0};
};

inline FloatScalar conj(const FloatScalar& x) { return x.conj(); }

// Uniform handles the templated layers use to mint scalars in one mode.
struct ExactField {
  using scalar = ExactScalar;
  static constexpr bool exact = true;

  std::shared_ptr<const QContext> ctx;

  scalar zero() const { return ExactScalar::make(ctx, GaussianRational{}); }
  scalar one() const { return ExactScalar::make(ctx, GaussianRational(1)); }
  scalar from_int(long n) const { return ExactScalar::make(ctx, GaussianRational(n)); }
  scalar from_rat(BigRat x) const { return ExactScalar::make(ctx, GaussianRational(std::move(x))); }
  scalar from_gauss(GaussianRational g) const { return ExactScalar::make(ctx, std::move(g)); }
  scalar make(GaussianRational a, GaussianRational b) const {
    return ExactScalar::make(ctx, std::move(a), std::move(b));
  }
  scalar q() const { return ExactScalar::make(ctx, ctx->q()); }
  scalar qbar() const { return ExactScalar::make(ctx, ctx->q().conj()); }
  scalar r() const { return ExactScalar::make(ctx, GaussianRational{}, GaussianRational(1)); }
  scalar rinv() const { return r().inv(); }
  std::complex<double> q_complex() const { return ctx->q().to_complex(); }
};

struct FloatField {
  using scalar = FloatScalar;
  static constexpr bool exact = false;

  std::shared_ptr<const FloatContext> ctx;

  scalar zero() const { return FloatScalar::make(ctx, 0.0); }
  scalar one() const { return FloatScalar::make(ctx, 1.0); }
  scalar from_int(long n) const { return FloatScalar::make(ctx, double(n)); }
  scalar from_rat(const BigRat& x) const { return FloatScalar::make(ctx, rat_to_double(x)); }
  scalar from_gauss(const GaussianRational& g) const {
    return FloatScalar::make(ctx, g.to_complex());
  }
  scalar make_complex(std::complex<double> v) const { return FloatScalar::make(ctx, v); }
  scalar q() const { return FloatScalar::make(ctx, ctx->q); }
  scalar qbar() const { return FloatScalar::make(ctx, std::conj(ctx->q)); }
  scalar r() const { return FloatScalar::make(ctx, ctx->r); }
  scalar rinv() const {
    if (ctx->r == 0.0) throw mode_error("(1-q^2)^{-1/2} undefined at |q| = 1");
    return FloatScalar::make(ctx, 1.0 / ctx->r);
  }
  std::complex<double> q_complex() const { return ctx->q; }
};

inline ExactField make_exact_field(const GaussianRational& q) {
  return ExactField{QContext::make(q)};
}
inline FloatField make_float_field(std::complex<double> q) {
  return FloatField{FloatContext::make(q)};
}

}  // namespace qstar
