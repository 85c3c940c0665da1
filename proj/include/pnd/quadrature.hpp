#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <vector>

#include "polynomial.hpp"

namespace pnd {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Hermite rule for E[f(Z)], Z ~ N(0, 1): weights sum to one and the
/// rule is exact for polynomials of degree <= 2n - 1.
///
/// Golub-Welsch for the starting nodes, then Newton on the orthonormal recurrence
/// psi_k = He_k / sqrt(k!), which stays finite for large n.
inline QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw OutOfRange("quadrature order must be positive");
  Matrix jac = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);

  auto psi = [n](double x, double& psi_n, double& psi_nm1) {
    double prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
      const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                          std::sqrt(static_cast<double>(k + 1));
      prev = cur;
      cur = next;
    }
    psi_n = cur;
    psi_nm1 = prev;
  };

  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double pn = 0.0, pnm1 = 1.0;
    for (int it = 0; it < 4; ++it) {
      psi(x, pn, pnm1);
      x -= pn / (std::sqrt(static_cast<double>(n)) * pnm1);
    }
    psi(x, pn, pnm1);
    r.nodes[i] = x;
    r.weights[i] = 1.0 / (n * pnm1 * pnm1);
  }
  // Enforce exact symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

/// n-point Gauss-Legendre rule on [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw OutOfRange("quadrature order must be positive");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = mid - half * x;
    r.nodes[n - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

/// Calls f(u, w) for every node of the dim-fold tensor product of a 1D rule.
template <class F>
void for_each_tensor_node(const QuadratureRule& rule, std::size_t dim, F&& f) {
  const std::size_t n = rule.size();
  std::vector<std::size_t> idx(dim, 0);
  Vector u(static_cast<Eigen::Index>(dim));
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      u(static_cast<Eigen::Index>(j)) = rule.nodes[idx[j]];
      w *= rule.weights[idx[j]];
    }
    f(static_cast<const Vector&>(u), w);
    std::size_t j = 0;
    while (j < dim && ++idx[j] == n) idx[j++] = 0;
    if (j == dim) break;
  }
}

}  // namespace pnd
