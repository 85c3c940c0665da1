#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace pnd {

/// Probabilists' Hermite polynomial He_k(x), orthogonal under exp(-x^2/2).
inline double hermite_1d(unsigned k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (unsigned n = 1; n < k; ++n) {
    const double next = x * cur - n * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace detail {

/// One row per degree k: the sparse list of (j, c) with  B_k = sum_j c T_j.
using ConversionTable = std::vector<std::vector<std::pair<unsigned, double>>>;

/// He_k(x) = sum_j table[k][j] x^j. Entries are integers, exact in double for the
/// degrees used here.
inline ConversionTable hermite_to_monomial(unsigned max_degree) {
  std::vector<std::vector<double>> dense(max_degree + 1);
  dense[0] = {1.0};
  if (max_degree >= 1) dense[1] = {0.0, 1.0};
  for (unsigned k = 1; k < max_degree; ++k) {
    // He_{k+1} = x He_k - k He_{k-1}
    std::vector<double> next(k + 2, 0.0);
    for (unsigned j = 0; j <= k; ++j) next[j + 1] += dense[k][j];
    for (unsigned j = 0; j + 1 <= k; ++j) next[j] -= k * dense[k - 1][j];
    dense[k + 1] = std::move(next);
  }
  ConversionTable t(max_degree + 1);
  for (unsigned k = 0; k <= max_degree; ++k)
    for (unsigned j = 0; j < dense[k].size(); ++j)
      if (dense[k][j] != 0.0) t[k].emplace_back(j, dense[k][j]);
  return t;
}

/// x^k = sum_j table[k][j] He_j(x).
inline ConversionTable monomial_to_hermite(unsigned max_degree) {
  std::vector<std::vector<double>> dense(max_degree + 1);
  dense[0] = {1.0};
  for (unsigned k = 0; k < max_degree; ++k) {
    // x He_j = He_{j+1} + j He_{j-1}
    std::vector<double> next(k + 2, 0.0);
    for (unsigned j = 0; j <= k; ++j) {
      const double c = dense[k][j];
      if (c == 0.0) continue;
      next[j + 1] += c;
      if (j > 0) next[j - 1] += j * c;
    }
    dense[k + 1] = std::move(next);
  }
  ConversionTable t(max_degree + 1);
  for (unsigned k = 0; k <= max_degree; ++k)
    for (unsigned j = 0; j < dense[k].size(); ++j)
      if (dense[k][j] != 0.0) t[k].emplace_back(j, dense[k][j]);
  return t;
}

/// Rewrites a tensor-product expansion term by term through a 1D table.
template <class Out, class In>
Out tensor_convert(const In& in, const ConversionTable& table) {
  const std::size_t d = in.dim();
  Out out(d);
  MultiIndex gamma(d, 0u);
  std::vector<std::size_t> pos(d, 0);
  for (const auto& [alpha, c] : in.terms()) {
    std::fill(pos.begin(), pos.end(), 0);
    while (true) {
      double w = c;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& [idx, coef] = table[alpha[j]][pos[j]];
        gamma[j] = idx;
        w *= coef;
      }
      out.add_term(gamma, w, 0.0);
      std::size_t j = 0;
      while (j < d && ++pos[j] == table[alpha[j]].size()) pos[j++] = 0;
      if (j == d) break;
    }
  }
  return out * 1.0;
}

inline unsigned max_axis_degree(const auto& s) {
  unsigned m = 0;
  for (const auto& [alpha, c] : s.terms())
    for (unsigned a : alpha) m = std::max(m, a);
  return m;
}

}  // namespace detail

/// Coefficients beta with p(x) = sum beta_alpha prod_j He_{alpha_j}(x_j).
inline HermiteCoeffs to_hermite(const Polynomial& p) {
  return detail::tensor_convert<HermiteCoeffs>(
      p, detail::monomial_to_hermite(detail::max_axis_degree(p)));
}

inline Polynomial from_hermite(const HermiteCoeffs& h) {
  return detail::tensor_convert<Polynomial>(
      h, detail::hermite_to_monomial(detail::max_axis_degree(h)));
}

inline double eval(const HermiteCoeffs& h, std::span<const double> x) {
  if (x.size() != h.dim()) throw DimensionMismatch(h.dim(), x.size());
  double s = 0.0;
  for (const auto& [alpha, c] : h.terms()) {
    double m = c;
    for (std::size_t j = 0; j < alpha.size(); ++j) m *= hermite_1d(alpha[j], x[j]);
    s += m;
  }
  return s;
}

/// p_theta(x) = sum beta_alpha theta^{-|alpha|} prod_j He_{alpha_j}(x_j / theta).
///
/// The density proportional to p_theta(x) exp(-|x|^2 / (2 theta^2)) convolved with
/// N(0, (1 - theta^2) I) gives back the density of from_hermite(h).
inline Polynomial theta_rescale(const HermiteCoeffs& h, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw OutOfRange("theta must lie in (0, 1]");
  if (theta == 1.0) return from_hermite(h);
  auto table = detail::hermite_to_monomial(detail::max_axis_degree(h));
  // He_k(x/theta) / theta^k = sum_j c_kj theta^{-(j+k)} x^j
  for (unsigned k = 0; k < table.size(); ++k)
    for (auto& [j, c] : table[k]) c *= std::pow(theta, -static_cast<double>(j + k));
  return detail::tensor_convert<Polynomial>(h, table);
}

}  // namespace pnd
