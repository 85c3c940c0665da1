#pragma once

// Random generators shared by the property tests.

#include <pnd/minimize.hpp>
#include <pnd/polynomial.hpp>

#include <Eigen/QR>

namespace pnd::testing {

/// Every multi-index of length dim with total degree <= max_degree.
inline std::vector<MultiIndex> all_indices(std::size_t dim, unsigned max_degree) {
  std::vector<MultiIndex> out;
  MultiIndex a(dim, 0u);
  while (true) {
    if (total_degree(a) <= max_degree) out.push_back(a);
    std::size_t j = 0;
    while (j < dim && ++a[j] > max_degree) a[j++] = 0;
    if (j == dim) break;
  }
  return out;
}

/// Dense random polynomial, coefficients uniform in [-scale, scale].
inline Polynomial random_poly(SplitMix64& rng, std::size_t dim, unsigned degree, double scale = 10.0) {
  Polynomial p(dim);
  for (const auto& a : all_indices(dim, degree)) p.add_term(a, rng.uniform(-scale, scale));
  return p;
}

/// Random nonnegative polynomial of degree 2k: a sum of squares plus a positive constant.
inline Polynomial random_sos(SplitMix64& rng, std::size_t dim, unsigned k, int squares = 2) {
  Polynomial p = Polynomial::constant(dim, rng.uniform(0.5, 2.0));
  for (int i = 0; i < squares; ++i) {
    const Polynomial q = random_poly(rng, dim, k, 1.0);
    p += q * q;
  }
  return p;
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
inline Matrix random_orthogonal(SplitMix64& rng, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Matrix random_spd(SplitMix64& rng, std::size_t dim, double lo = 0.5, double hi = 2.0) {
  const Matrix q = random_orthogonal(rng, dim);
  Vector ev(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = rng.uniform(lo, hi);
  const Matrix a = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

/// Matrix with singular values in [1, cond]: condition number at most cond.
inline Matrix random_well_conditioned(SplitMix64& rng, std::size_t dim, double cond = 10.0) {
  const Matrix u = random_orthogonal(rng, dim);
  const Matrix v = random_orthogonal(rng, dim);
  Vector s(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = rng.uniform(1.0, cond);
  return u * s.asDiagonal() * v.transpose();
}

inline Vector random_vector(SplitMix64& rng, std::size_t dim, double lo, double hi) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

/// Coefficient error relative to the largest coefficient of the reference.
inline double relative_diff(const Polynomial& a, const Polynomial& ref) {
  return a.max_abs_diff(ref) / std::max(1.0, ref.max_abs_coef());
}

}  // namespace pnd::testing
