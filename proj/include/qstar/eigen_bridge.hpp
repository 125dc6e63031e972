#pragma once

#include <Eigen/Dense>

#include "qstar/operators.hpp"

namespace qstar {

using ComplexMatrix = Eigen::MatrixXcd;

template <class F>
ComplexMatrix to_dense(const TruncatedOperator<F>& a) {
  ComplexMatrix m = ComplexMatrix::Zero(a.dim(), a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (const auto& [c, v] : a.row(r)) m(r, c) = detail::to_c(v);
  return m;
}

struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix vectors;
  // Frobenius norm of G - V diag(w) V*; bounds how far the reported
  // eigenvalues can sit from the true ones (Weyl perturbation).
  double decomposition_residual = 0;
};

inline HermitianSpectrum hermitian_spectrum(const ComplexMatrix& g,
                                            double hermitian_tol = 1e-12) {
  double scale = std::max(1.0, g.norm());
  if ((g - g.adjoint()).norm() > hermitian_tol * scale)
    throw operator_error("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  if (es.info() != Eigen::Success)
    throw operator_error("Hermitian eigensolver failed to converge");
  HermitianSpectrum out;
  out.eigenvalues = es.eigenvalues();
  out.vectors = es.eigenvectors();
  out.decomposition_residual =
      (g - out.vectors * out.eigenvalues.asDiagonal() *
               out.vectors.adjoint())
          .norm();
  return out;
}

// Dense complex matrix lifted onto a graded space with wide-open shift
// bands; the validity metadata of the result promises nothing beyond the
// window itself.
inline TruncatedOperator<FloatField> operator_from_dense(const FloatField& f,
                                                         const GradedSpace::Ptr& sp,
                                                         const ComplexMatrix& m) {
  const int L = int(sp->truncation());
  auto out = TruncatedOperator<FloatField>::zero(f, sp, L, L);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != std::complex<double>(0.0, 0.0))
        out.set_entry(std::size_t(r), std::size_t(c), f.make_complex(m(r, c)));
  return out;
}

// Applies a real scalar function to a Hermitian float-mode operator through
// its spectral decomposition.  Exact mode has its own diagonal-only path in
// the representation builders.
template <class Fn>
TruncatedOperator<FloatField> hermitian_function(const TruncatedOperator<FloatField>& a,
                                                 Fn&& fn) {
  auto spec = hermitian_spectrum(to_dense(a));
  Eigen::VectorXd w = spec.eigenvalues;
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = fn(w(i));
  ComplexMatrix m = spec.vectors * w.asDiagonal() * spec.vectors.adjoint();
  // Solver roundoff smears tiny entries across all level blocks; discarding
  // them keeps the declared raise and drop (and hence the valid depths) tight
  // when the input preserves levels, as the diagonal coefficient operators
  // here do.
  double peak = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) peak = std::max(peak, std::abs(m(r, c)));
  const double cutoff = peak * 1e-13;
  const auto& sp = a.space();
  int raise = -int(sp->truncation());
  int drop = -int(sp->truncation());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > cutoff) {
        int shift = sp->level(std::size_t(r)) - sp->level(std::size_t(c));
        raise = std::max(raise, shift);
        drop = std::max(drop, -shift);
      }
  auto out = TruncatedOperator<FloatField>::zero(a.field(), sp, raise, drop);
  out.with_valid_depth(a.valid_depth());
  out.with_row_depth(a.row_depth());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > cutoff) out.set_entry(r, c, a.field().make_complex(m(r, c)));
  return out;
}

}  // namespace qstar
