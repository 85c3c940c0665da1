#pragma once

#include <complex>
#include <cmath>

#include "distribution.hpp"

namespace pnd {

/// phi(t) = sum_alpha beta_alpha (i t)^alpha * exp(-t^T Sigma t / 2) * exp(i b.t)
///
/// beta is stored as a real Polynomial in t; the factor i^{|alpha|} is implicit.
class CharFn {
public:
  std::size_t dim() const noexcept { return beta_.dim(); }
  const Polynomial& beta() const noexcept { return beta_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  const Vector& shift() const noexcept { return shift_; }
  /// True when the input had beta_0 != 1 and was rescaled.
  bool renormalized() const noexcept { return renormalized_; }

  friend CharFn make_charfn(Polynomial beta, const Matrix& sigma, Vector shift);

private:
  explicit CharFn(Polynomial beta) : beta_(std::move(beta)) {}
  Polynomial beta_;
  Matrix sigma_;
  Vector shift_;
  bool renormalized_ = false;
};

/// Validates Sigma (symmetric positive definite) and rescales beta so beta_0 = 1.
inline CharFn make_charfn(Polynomial beta, const Matrix& sigma, Vector shift) {
  const std::size_t d = beta.dim();
  if (static_cast<std::size_t>(sigma.rows()) != d) throw DimensionMismatch(d, sigma.rows());
  if (static_cast<std::size_t>(shift.size()) != d) throw DimensionMismatch(d, shift.size());
  const QuadForm q = make_quadform(sigma);
  const double b0 = beta.coef(MultiIndex(d, 0u));
  if (b0 == 0.0) throw ZeroIntegral(b0);
  CharFn cf(std::move(beta));
  if (b0 != 1.0) {
    cf.beta_ *= 1.0 / b0;
    cf.beta_.add_term(MultiIndex(d, 0u), 1.0 - cf.beta_.coef(MultiIndex(d, 0u)), 0.0);
    cf.renormalized_ = true;
  }
  cf.sigma_ = q.matrix();
  cf.shift_ = std::move(shift);
  return cf;
}

/// Characteristic function of a PND.
///
/// With X = L U + b and U having density q(u) times the standard normal, the Hermite
/// coefficients h of q give E exp(i s.U) = sum h_alpha (i s)^alpha exp(-|s|^2 / 2).
/// Substituting s = L^T t keeps each term homogeneous, so beta(t) = h(L^T t).
inline CharFn forward_cf(const Pnd& f) {
  const std::size_t d = f.dim();
  Polynomial g(d);
  for (const auto& [alpha, c] : f.hermite().terms()) g.add_term(alpha, c);
  const Matrix lt = f.form().whitener().transpose();
  Polynomial beta = affine_substitute(g, lt, Vector::Zero(static_cast<Eigen::Index>(d)));
  return make_charfn(std::move(beta), f.form().inverse(), f.shift());
}

inline CharFn gaussian_cf(const Gaussian& g) {
  return make_charfn(Polynomial::constant(g.dim(), 1.0), g.cov, g.mean);
}

/// The unchecked inverse transform: density polynomial p, precision A and shift b.
/// p may take negative values; the result need not be a density.
struct DensityParts {
  Polynomial poly;
  Matrix precision;
  Vector shift;
};

inline DensityParts inverse_cf_parts(const CharFn& cf) {
  const std::size_t d = cf.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix a = make_quadform(cf.sigma()).inverse();
  const QuadForm form = make_quadform(a);
  // s = L^T t  <=>  t = L^{-T} s
  const Matrix l_inv = form.whitener_inverse();
  const Polynomial g = affine_substitute(cf.beta(), l_inv.transpose(), Vector::Zero(n));
  HermiteCoeffs h(d);
  for (const auto& [alpha, c] : g.terms()) h.add_term(alpha, c);
  const Polynomial q = from_hermite(h);
  // p(x) = q(L^{-1}(x - b))
  Polynomial p = affine_substitute(q, l_inv, -(l_inv * cf.shift()));
  return {std::move(p), form.matrix(), cf.shift()};
}

/// Density whose characteristic function is cf; throws NegativeDensity when the
/// associated polynomial takes negative values.
inline Pnd inverse_cf(const CharFn& cf, const PndOptions& opt = {}) {
  const DensityParts parts = inverse_cf_parts(cf);
  return make_pnd(parts.poly, parts.precision, parts.shift, opt);
}

inline std::complex<double> cf_eval(const CharFn& cf, const Vector& t) {
  if (static_cast<std::size_t>(t.size()) != cf.dim()) throw DimensionMismatch(cf.dim(), t.size());
  static constexpr double re_unit[4] = {1.0, 0.0, -1.0, 0.0};
  static constexpr double im_unit[4] = {0.0, 1.0, 0.0, -1.0};
  double re = 0.0, im = 0.0;
  for (const auto& [alpha, c] : cf.beta().terms()) {
    double m = c;
    for (std::size_t j = 0; j < alpha.size(); ++j) m *= std::pow(t(static_cast<Eigen::Index>(j)), alpha[j]);
    const unsigned k = total_degree(alpha) % 4;
    re += re_unit[k] * m;
    im += im_unit[k] * m;
  }
  const double gauss = std::exp(-0.5 * t.dot(cf.sigma() * t));
  return std::complex<double>(re, im) * gauss * std::polar(1.0, cf.shift().dot(t));
}

/// sum beta_alpha (i t)^alpha = real(t) + i imag(t), both real polynomials in t.
struct ExpandedPoly {
  Polynomial real;
  Polynomial imag;
};

inline ExpandedPoly expanded_parts(const CharFn& cf) {
  ExpandedPoly e{Polynomial(cf.dim()), Polynomial(cf.dim())};
  for (const auto& [alpha, c] : cf.beta().terms()) {
    const unsigned k = total_degree(alpha);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) e.real.add_term(alpha, sign * c);
    else e.imag.add_term(alpha, sign * c);
  }
  return e;
}

inline CharFn cf_multiply(const CharFn& a, const CharFn& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  return make_charfn(a.beta() * b.beta(), a.sigma() + b.sigma(), a.shift() + b.shift());
}

/// Largest coefficient, Sigma or shift discrepancy between two characteristic functions.
inline double max_abs_diff(const CharFn& a, const CharFn& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
  double m = a.beta().max_abs_diff(b.beta());
  m = std::max(m, (a.sigma() - b.sigma()).cwiseAbs().maxCoeff());
  m = std::max(m, (a.shift() - b.shift()).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace pnd
