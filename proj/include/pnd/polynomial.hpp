#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"

namespace pnd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exponent tuple alpha = (alpha_1, ..., alpha_d).
using MultiIndex = std::vector<unsigned>;

inline unsigned total_degree(const MultiIndex& alpha) {
  unsigned s = 0;
  for (unsigned a : alpha) s += a;
  return s;
}

/// Graded lexicographic order: total degree first, then lexicographic on the entries.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const unsigned da = total_degree(a);
    const unsigned db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Coefficients whose magnitude falls below this after arithmetic are dropped.
inline constexpr double kDropTolerance = 1e-14;

struct MonomialBasis {};
struct HermiteBasis {};

/// Sparse expansion sum_alpha c_alpha B_alpha(x) in a tensor-product basis.
///
/// Stored terms are kept canonical: every key has length dim() and no stored
/// coefficient is zero. Because keys are graded-lex ordered, the last key
/// carries the total degree.
template <class Basis>
class SparseSeries {
public:
  using Terms = std::map<MultiIndex, double, GradedLexLess>;

  explicit SparseSeries(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw OutOfRange("dimension must be positive");
  }

  SparseSeries(std::size_t dim, std::initializer_list<std::pair<MultiIndex, double>> terms)
      : SparseSeries(dim) {
    for (const auto& [alpha, c] : terms) add_term(alpha, c);
  }

  static SparseSeries constant(std::size_t dim, double c) {
    SparseSeries s(dim);
    s.add_term(MultiIndex(dim, 0u), c);
    return s;
  }

  static SparseSeries monomial(const MultiIndex& alpha, double c = 1.0) {
    SparseSeries s(alpha.size());
    s.add_term(alpha, c);
    return s;
  }

  std::size_t dim() const noexcept { return dim_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  unsigned degree() const noexcept {
    return terms_.empty() ? 0u : total_degree(terms_.rbegin()->first);
  }

  double coef(const MultiIndex& alpha) const {
    check_index(alpha);
    const auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Accumulates c into the coefficient of alpha.
  void add_term(const MultiIndex& alpha, double c, double drop = kDropTolerance) {
    check_index(alpha);
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < drop || it->second == 0.0) terms_.erase(it);
  }

  SparseSeries& operator+=(const SparseSeries& o) {
    check_dim(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
    return *this;
  }

  SparseSeries& operator-=(const SparseSeries& o) {
    check_dim(o);
    for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
    return *this;
  }

  SparseSeries& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (std::abs(it->second) < kDropTolerance) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend SparseSeries operator+(SparseSeries a, const SparseSeries& b) { return a += b; }
  friend SparseSeries operator-(SparseSeries a, const SparseSeries& b) { return a -= b; }
  friend SparseSeries operator*(SparseSeries a, double s) { return a *= s; }
  friend SparseSeries operator*(double s, SparseSeries a) { return a *= s; }
  friend bool operator==(const SparseSeries& a, const SparseSeries& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Largest coefficient-wise absolute difference (absent terms count as zero).
  double max_abs_diff(const SparseSeries& o) const {
    check_dim(o);
    double m = 0.0;
    for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c - o.coef(alpha)));
    for (const auto& [alpha, c] : o.terms_)
      if (!terms_.count(alpha)) m = std::max(m, std::abs(c));
    return m;
  }

  double max_abs_coef() const noexcept {
    double m = 0.0;
    for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  void check_dim(const SparseSeries& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch(dim_, o.dim_);
  }

private:
  void check_index(const MultiIndex& alpha) const {
    if (alpha.size() != dim_) throw DimensionMismatch(dim_, alpha.size());
  }

  std::size_t dim_;
  Terms terms_;
};

using Polynomial = SparseSeries<MonomialBasis>;
using HermiteCoeffs = SparseSeries<HermiteBasis>;

/// Variable x_j as a polynomial in dim variables.
inline Polynomial variable(std::size_t dim, std::size_t j) {
  MultiIndex alpha(dim, 0u);
  alpha.at(j) = 1;
  return Polynomial::monomial(alpha);
}

inline double eval(const Polynomial& p, std::span<const double> x) {
  if (x.size() != p.dim()) throw DimensionMismatch(p.dim(), x.size());
  double s = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double m = c;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (unsigned k = 0; k < alpha[j]; ++k) m *= x[j];
    s += m;
  }
  return s;
}

inline double eval(const Polynomial& p, const Vector& x) {
  return eval(p, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

inline double eval(const Polynomial& p, std::initializer_list<double> x) {
  return eval(p, std::span<const double>(x.begin(), x.size()));
}

/// Exact coefficient convolution.
inline Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  p.check_dim(q);
  Polynomial r(p.dim());
  MultiIndex gamma(p.dim());
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) {
      for (std::size_t j = 0; j < gamma.size(); ++j) gamma[j] = a[j] + b[j];
      r.add_term(gamma, ca * cb, 0.0);
    }
  }
  // Cancellation is only resolved once every product has been accumulated.
  return r * 1.0;
}

inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }

inline Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial r = Polynomial::constant(p.dim(), 1.0);
  for (unsigned i = 0; i < k; ++i) r = r * p;
  return r;
}

/// Returns x -> p(M x + c).
inline Polynomial affine_substitute(const Polynomial& p, const Matrix& m, const Vector& c) {
  const std::size_t d = p.dim();
  if (static_cast<std::size_t>(m.rows()) != d) throw DimensionMismatch(d, m.rows());
  if (static_cast<std::size_t>(m.cols()) != d) throw DimensionMismatch(d, m.cols());
  if (static_cast<std::size_t>(c.size()) != d) throw DimensionMismatch(d, c.size());

  std::vector<unsigned> max_exp(d, 0u);
  for (const auto& [alpha, coef] : p.terms())
    for (std::size_t j = 0; j < d; ++j) max_exp[j] = std::max(max_exp[j], alpha[j]);

  // powers[j][k] = (row_j(M) x + c_j)^k
  std::vector<std::vector<Polynomial>> powers(d);
  for (std::size_t j = 0; j < d; ++j) {
    Polynomial lin = Polynomial::constant(d, c(j));
    for (std::size_t k = 0; k < d; ++k) lin += variable(d, k) * m(j, k);
    powers[j].reserve(max_exp[j] + 1);
    powers[j].push_back(Polynomial::constant(d, 1.0));
    for (unsigned k = 1; k <= max_exp[j]; ++k) powers[j].push_back(powers[j].back() * lin);
  }

  Polynomial r(d);
  for (const auto& [alpha, coef] : p.terms()) {
    Polynomial term = Polynomial::constant(d, coef);
    for (std::size_t j = 0; j < d; ++j)
      if (alpha[j] > 0) term = term * powers[j][alpha[j]];
    r += term;
  }
  return r;
}

inline Polynomial derivative(const Polynomial& p, std::size_t j) {
  if (j >= p.dim()) throw DimensionMismatch(p.dim(), j);
  Polynomial r(p.dim());
  for (const auto& [alpha, c] : p.terms()) {
    if (alpha[j] == 0) continue;
    MultiIndex beta = alpha;
    beta[j] -= 1;
    r.add_term(beta, c * alpha[j]);
  }
  return r;
}

/// Homogeneous part of total degree k.
inline Polynomial homogeneous_part(const Polynomial& p, unsigned k) {
  Polynomial r(p.dim());
  for (const auto& [alpha, c] : p.terms())
    if (total_degree(alpha) == k) r.add_term(alpha, c);
  return r;
}

/// Flattened form of a polynomial for repeated value/gradient/Hessian evaluation.
class PolyEvaluator {
public:
  explicit PolyEvaluator(const Polynomial& p) : dim_(p.dim()) {
    coefs_.reserve(p.size());
    exps_.reserve(p.size() * dim_);
    for (const auto& [alpha, c] : p.terms()) {
      coefs_.push_back(c);
      for (unsigned a : alpha) {
        exps_.push_back(a);
        max_exp_ = std::max(max_exp_, a);
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }

  double value(const Vector& x) const {
    double f = 0.0;
    evaluate(x, f, nullptr, nullptr);
    return f;
  }

  void evaluate(const Vector& x, double& f, Vector* grad, Matrix* hess) const {
    if (static_cast<std::size_t>(x.size()) != dim_) throw DimensionMismatch(dim_, x.size());
    const std::size_t stride = max_exp_ + 1;
    std::vector<double> pw(dim_ * stride);
    for (std::size_t j = 0; j < dim_; ++j) {
      pw[j * stride] = 1.0;
      for (unsigned k = 1; k <= max_exp_; ++k) pw[j * stride + k] = pw[j * stride + k - 1] * x(j);
    }
    auto power = [&](std::size_t j, int k) { return k < 0 ? 0.0 : pw[j * stride + k]; };

    f = 0.0;
    if (grad) grad->setZero(dim_);
    if (hess) hess->setZero(dim_, dim_);
    for (std::size_t t = 0; t < coefs_.size(); ++t) {
      const unsigned* a = &exps_[t * dim_];
      const double c = coefs_[t];
      double m = c;
      for (std::size_t j = 0; j < dim_; ++j) m *= power(j, a[j]);
      f += m;
      if (!grad && !hess) continue;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (a[i] == 0) continue;
        if (grad) {
          double g = c * a[i] * power(i, static_cast<int>(a[i]) - 1);
          for (std::size_t j = 0; j < dim_; ++j)
            if (j != i) g *= power(j, a[j]);
          (*grad)(i) += g;
        }
        if (!hess) continue;
        for (std::size_t k = i; k < dim_; ++k) {
          double h;
          if (k == i) {
            if (a[i] < 2) continue;
            h = c * a[i] * (a[i] - 1) * power(i, static_cast<int>(a[i]) - 2);
            for (std::size_t j = 0; j < dim_; ++j)
              if (j != i) h *= power(j, a[j]);
          } else {
            if (a[k] == 0) continue;
            h = c * a[i] * a[k] * power(i, static_cast<int>(a[i]) - 1) *
                power(k, static_cast<int>(a[k]) - 1);
            for (std::size_t j = 0; j < dim_; ++j)
              if (j != i && j != k) h *= power(j, a[j]);
          }
          (*hess)(i, k) += h;
          if (k != i) (*hess)(k, i) += h;
        }
      }
    }
  }

private:
  std::size_t dim_;
  unsigned max_exp_ = 0;
  std::vector<unsigned> exps_;
  std::vector<double> coefs_;
};

}  // namespace pnd
