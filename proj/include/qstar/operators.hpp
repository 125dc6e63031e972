#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "qstar/graded_space.hpp"
#include "qstar/scalar.hpp"

namespace qstar {

namespace detail {

template <class S>
std::complex<double> to_c(const S& s) {
  if constexpr (std::is_same_v<S, ExactScalar>) {
    return s.to_complex();
  } else {
    return s.value();
  }
}

}  // namespace detail

// Matrix truncation of an operator on the infinite graded completion of a
// GradedSpace.  `raise` and `drop` bound how far the modeled operator can
// push levels up respectively down.  `valid_depth` marks the columns on
// which the truncated matrix coincides with the modeled operator (and whose
// true images stay inside the window); `row_depth` is the mirror statement
// for rows.  Taking adjoints swaps the two pairs, so the bookkeeping stays
// sharp for products like s* s even when s mixes several level shifts.
// Everything beyond the declared depths is truncation noise and is never
// used by the checks.
template <class F>
class TruncatedOperator {
 public:
  using S = typename F::scalar;

  static TruncatedOperator zero(const F& f, GradedSpace::Ptr sp, int raise = 0) {
    return TruncatedOperator(f, std::move(sp), raise, std::max(-raise, 0));
  }

  static TruncatedOperator zero(const F& f, GradedSpace::Ptr sp, int raise, int drop) {
    return TruncatedOperator(f, std::move(sp), raise, drop);
  }

  static TruncatedOperator identity(const F& f, GradedSpace::Ptr sp) {
    TruncatedOperator t(f, std::move(sp), 0, 0);
    for (std::size_t i = 0; i < t.space_->size(); ++i) t.rows_[i][i] = f.one();
    return t;
  }

  const F& field() const { return field_; }
  const GradedSpace::Ptr& space() const { return space_; }
  int raise() const { return raise_; }
  int drop() const { return drop_; }
  int valid_depth() const { return valid_depth_; }
  int row_depth() const { return row_depth_; }
  std::size_t dim() const { return space_->size(); }

  TruncatedOperator& with_valid_depth(int vd) {
    valid_depth_ = std::min(vd, valid_depth_);
    return *this;
  }

  TruncatedOperator& with_row_depth(int rd) {
    row_depth_ = std::min(rd, row_depth_);
    return *this;
  }

  void set_entry(std::size_t r, std::size_t c, S v) {
    if (space_->level(r) - space_->level(c) > raise_)
      throw operator_error("entry at rows raising level by " +
                           std::to_string(space_->level(r) - space_->level(c)) +
                           " contradicts declared raise " + std::to_string(raise_));
    if (space_->level(c) - space_->level(r) > drop_)
      throw operator_error("entry at rows lowering level by " +
                           std::to_string(space_->level(c) - space_->level(r)) +
                           " contradicts declared drop " + std::to_string(drop_));
    if (v.is_zero())
      rows_[r].erase(c);
    else
      rows_[r][c] = std::move(v);
  }

  void add_entry(std::size_t r, std::size_t c, const S& v) {
    auto it = rows_[r].find(c);
    if (it == rows_[r].end()) {
      set_entry(r, c, v);
    } else {
      it->second = it->second + v;
      if (it->second.is_zero()) rows_[r].erase(it);
    }
  }

  S entry(std::size_t r, std::size_t c) const {
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? field_.zero() : it->second;
  }

  const std::map<std::size_t, S>& row(std::size_t r) const { return rows_[r]; }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  bool is_zero() const {
    for (const auto& r : rows_)
      if (!r.empty()) return false;
    return true;
  }

  // Columns of the adjoint are rows of the original and vice versa, so the
  // (raise, valid_depth) and (drop, row_depth) pairs swap with no loss.
  TruncatedOperator adjoint() const {
    if (!space_->orthonormal())
      throw operator_error(
          "adjoint by transposition needs an orthonormal basis; supply the "
          "adjoint matrix explicitly on Gram-weighted bases");
    TruncatedOperator out(field_, space_, drop_, raise_);
    out.valid_depth_ = row_depth_;
    out.row_depth_ = valid_depth_;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, v] : rows_[r]) out.rows_[c][r] = qstar::conj(v);
    return out;
  }

  friend TruncatedOperator operator*(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    a.check_space(b);
    TruncatedOperator out(a.field_, a.space_, a.raise_ + b.raise_, a.drop_ + b.drop_);
    out.valid_depth_ = std::min(b.valid_depth_, a.valid_depth_ - b.raise_);
    out.row_depth_ = std::min(a.row_depth_, b.row_depth_ - a.drop_);
    for (std::size_t r = 0; r < a.rows_.size(); ++r)
      for (const auto& [k, av] : a.rows_[r])
        for (const auto& [c, bv] : b.rows_[k]) out.add_entry_raw(r, c, av * bv);
    return out;
  }

  friend TruncatedOperator operator+(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    a.check_space(b);
    TruncatedOperator out(a.field_, a.space_, std::max(a.raise_, b.raise_),
                          std::max(a.drop_, b.drop_));
    out.valid_depth_ = std::min(a.valid_depth_, b.valid_depth_);
    out.row_depth_ = std::min(a.row_depth_, b.row_depth_);
    out.rows_ = a.rows_;
    for (std::size_t r = 0; r < b.rows_.size(); ++r)
      for (const auto& [c, v] : b.rows_[r]) out.add_entry_raw(r, c, v);
    return out;
  }

  friend TruncatedOperator operator-(const TruncatedOperator& a,
                                     const TruncatedOperator& b) {
    return a + (a.field_.from_int(-1) * b);
  }

  friend TruncatedOperator operator*(const S& s, const TruncatedOperator& a) {
    TruncatedOperator out(a.field_, a.space_, a.raise_, a.drop_);
    out.valid_depth_ = a.valid_depth_;
    out.row_depth_ = a.row_depth_;
    if (s.is_zero()) return out;
    for (std::size_t r = 0; r < a.rows_.size(); ++r)
      for (const auto& [c, v] : a.rows_[r]) out.rows_[r][c] = s * v;
    return out;
  }

  // Kronecker-style product reindexed into the level-major order of the
  // tensor space.  A factor with full validity imposes no depth constraint;
  // a partially valid factor caps the total level at its own valid depth,
  // because a total-level-d vector can load level d onto either factor.
  friend TruncatedOperator tensor(const TruncatedOperator& a, const TruncatedOperator& b,
                                  GradedSpace::Ptr target = nullptr) {
    if (!target) target = GradedSpace::tensor_pair(a.space_, b.space_);
    TruncatedOperator out(a.field_, target, a.raise_ + b.raise_, a.drop_ + b.drop_);
    int vd = int(target->truncation()) - std::max(a.raise_ + b.raise_, 0);
    if (a.valid_depth_ < int(a.space_->truncation())) vd = std::min(vd, a.valid_depth_);
    if (b.valid_depth_ < int(b.space_->truncation())) vd = std::min(vd, b.valid_depth_);
    out.valid_depth_ = vd;
    int rd = int(target->truncation()) - std::max(a.drop_ + b.drop_, 0);
    if (a.row_depth_ < int(a.space_->truncation())) rd = std::min(rd, a.row_depth_);
    if (b.row_depth_ < int(b.space_->truncation())) rd = std::min(rd, b.row_depth_);
    out.row_depth_ = rd;
    for (std::size_t ar = 0; ar < a.rows_.size(); ++ar)
      for (const auto& [ac, av] : a.rows_[ar])
        for (std::size_t br = 0; br < b.rows_.size(); ++br)
          for (const auto& [bc, bv] : b.rows_[br])
            out.rows_[target->pair_index(ar, br)][target->pair_index(ac, bc)] = av * bv;
    return out;
  }

 private:
  TruncatedOperator(F f, GradedSpace::Ptr sp, int raise, int drop)
      : field_(std::move(f)),
        space_(std::move(sp)),
        raise_(raise),
        drop_(drop),
        valid_depth_(int(space_->truncation()) - std::max(raise, 0)),
        row_depth_(int(space_->truncation()) - std::max(drop, 0)),
        rows_(space_->size()) {}

  void add_entry_raw(std::size_t r, std::size_t c, S v) {
    auto it = rows_[r].find(c);
    if (it == rows_[r].end()) {
      if (!v.is_zero()) rows_[r].emplace(c, std::move(v));
    } else {
      it->second = it->second + v;
      if (it->second.is_zero()) rows_[r].erase(it);
    }
  }

  void check_space(const TruncatedOperator& o) const {
    if (space_ != o.space_ && !space_->same(*o.space_))
      throw operator_error("operators act on different spaces");
  }

  F field_;
  GradedSpace::Ptr space_;
  int raise_;
  int drop_;
  int valid_depth_;
  int row_depth_;
  std::vector<std::map<std::size_t, S>> rows_;
};

// Orthogonal projection onto the span of basis labels with level <= depth.
// depth = -1 gives the zero operator, depth = L the identity.
template <class F>
TruncatedOperator<F> safe_projection(const F& f, GradedSpace::Ptr sp, int depth) {
  if (depth > int(sp->truncation()))
    throw operator_error("projection depth exceeds the space truncation");
  auto out = TruncatedOperator<F>::zero(f, sp);
  std::size_t n = sp->prefix_size(depth);
  for (std::size_t i = 0; i < n; ++i) out.set_entry(i, i, f.one());
  return out;
}

// Plain matrix-vector product over complex doubles; exact entries are
// converted.  Callers are responsible for keeping the input supported on a
// depth where the operator is valid.
template <class F>
std::vector<std::complex<double>> apply_complex(
    const TruncatedOperator<F>& a, const std::vector<std::complex<double>>& x) {
  if (x.size() != a.dim())
    throw operator_error("vector length does not match operator dimension");
  std::vector<std::complex<double>> y(a.dim(), {0.0, 0.0});
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (const auto& [c, v] : a.row(r)) y[r] += detail::to_c(v) * x[c];
  return y;
}

template <class F>
double frobenius_norm(const TruncatedOperator<F>& a) {
  double s = 0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (const auto& [c, v] : a.row(r)) s += std::norm(detail::to_c(v));
  return std::sqrt(s);
}

// Certified upper bound on the spectral norm:
// min(Frobenius, sqrt(norm_1 * norm_inf)).  Exact for matrices with at most
// one nonzero per row and column (all the defect operators produced here).
template <class F>
double spectral_upper_bound(const TruncatedOperator<F>& a) {
  double frob2 = 0, ninf = 0;
  std::vector<double> colsum(a.dim(), 0.0);
  for (std::size_t r = 0; r < a.dim(); ++r) {
    double rowsum = 0;
    for (const auto& [c, v] : a.row(r)) {
      double m = std::abs(detail::to_c(v));
      rowsum += m;
      colsum[c] += m;
      frob2 += m * m;
    }
    ninf = std::max(ninf, rowsum);
  }
  double n1 = 0;
  for (double s : colsum) n1 = std::max(n1, s);
  return std::min(std::sqrt(frob2), std::sqrt(n1 * ninf));
}

// Certified lower bound via the variational characterization: any vector v
// gives |Av|/|v| <= |A|.  Iterating with A*A drives v toward the top
// singular vector; the start vector is deterministic.
template <class F>
double spectral_lower_bound(const TruncatedOperator<F>& a, int iterations = 30) {
  const std::size_t n = a.dim();
  std::vector<std::complex<double>> v(n, {1.0, 0.0}), av(n), atav(n);
  double best = 0;
  for (int it = 0; it < iterations; ++it) {
    double vn = 0;
    for (const auto& x : v) vn += std::norm(x);
    vn = std::sqrt(vn);
    if (vn == 0) return best;
    for (auto& x : v) x /= vn;
    std::fill(av.begin(), av.end(), std::complex<double>{});
    for (std::size_t r = 0; r < n; ++r)
      for (const auto& [c, val] : a.row(r)) av[r] += detail::to_c(val) * v[c];
    double an = 0;
    for (const auto& x : av) an += std::norm(x);
    best = std::max(best, std::sqrt(an));
    std::fill(atav.begin(), atav.end(), std::complex<double>{});
    for (std::size_t r = 0; r < n; ++r)
      for (const auto& [c, val] : a.row(r))
        atav[c] += std::conj(detail::to_c(val)) * av[r];
    v = atav;
  }
  return best;
}

// Certified upper bound on |A P_depth| where P_depth projects onto levels
// <= depth.  Asking beyond the operator's valid depth would measure
// truncation noise and is rejected.
template <class F>
double residual_norm(const TruncatedOperator<F>& a, int depth) {
  if (depth > a.valid_depth())
    throw operator_error("residual depth " + std::to_string(depth) +
                         " exceeds valid depth " + std::to_string(a.valid_depth()));
  auto restricted = a * safe_projection(a.field(), a.space(), depth);
  return spectral_upper_bound(restricted);
}

// Text serialization: one JSON header line, then "row col re im" entries
// (0-based indices), suitable for reloading or external inspection.
template <class F>
void export_operator(const TruncatedOperator<F>& a, std::ostream& os) {
  os << "{\"space\": \"" << space_kind_name(a.space()->kind())
     << "\", \"truncation\": " << a.space()->truncation()
     << ", \"dim\": " << a.dim() << ", \"raise\": " << a.raise()
     << ", \"valid_depth\": " << a.valid_depth() << ", \"nnz\": " << a.nonzeros()
     << "}\n";
  os.precision(17);
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (const auto& [c, v] : a.row(r)) {
      auto z = detail::to_c(v);
      os << r << " " << c << " " << z.real() << " " << z.imag() << "\n";
    }
}

}  // namespace qstar
