#pragma once

#include <cmath>

#include "polynomial.hpp"

namespace pnd {

inline double max_asymmetry(const Matrix& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); }

/// Lower Cholesky factor C with A = C C^T; throws on the first non-positive pivot.
inline Matrix cholesky_lower(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - c.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) throw NotPositiveDefinite(static_cast<std::size_t>(j), pivot);
    c(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i)
      c(i, j) = (a(i, j) - c.row(i).head(j).dot(c.row(j).head(j))) / c(j, j);
  }
  return c;
}

/// Symmetric positive-definite A together with a whitener L, L^T A L = I.
///
/// L is the inverse transpose of the lower Cholesky factor of A, so it is upper
/// triangular and L L^T = A^{-1}.
class QuadForm {
public:
  const Matrix& matrix() const noexcept { return a_; }
  const Matrix& whitener() const noexcept { return l_; }
  const Matrix& whitener_inverse() const noexcept { return l_inv_; }
  /// A^{-1} = L L^T.
  const Matrix& inverse() const noexcept { return a_inv_; }
  double det() const noexcept { return det_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }

  friend QuadForm make_quadform(const Matrix& a);

private:
  Matrix a_, l_, l_inv_, a_inv_;
  double det_ = 1.0;
};

inline QuadForm make_quadform(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch(a.rows(), a.cols());
  if (a.rows() == 0) throw OutOfRange("empty matrix");
  const double asym = max_asymmetry(a);
  if (asym > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) throw NotSymmetric(asym);
  const Matrix sym = 0.5 * (a + a.transpose());
  const Matrix c = cholesky_lower(sym);
  const Eigen::Index n = a.rows();

  QuadForm q;
  q.a_ = sym;
  const Matrix c_inv = c.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  q.l_ = c_inv.transpose();
  q.l_inv_ = c.transpose();
  q.a_inv_ = q.l_ * q.l_.transpose();
  q.det_ = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) q.det_ *= c(i, i) * c(i, i);
  return q;
}

}  // namespace pnd
