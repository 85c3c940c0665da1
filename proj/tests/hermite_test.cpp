#include <gtest/gtest.h>

#include <pnd/hermite.hpp>
#include <pnd/quadrature.hpp>

#include "support.hpp"

using namespace pnd;

namespace {

/// Oracle: beta_alpha = E[p(Z) prod He_{alpha_j}(Z_j)] / alpha!, Z standard normal,
/// by tensor Gauss-Hermite quadrature. Exact for polynomial integrands.
HermiteCoeffs hermite_by_projection(const Polynomial& p) {
  const std::size_t d = p.dim();
  const unsigned deg = p.degree();
  const QuadratureRule rule = gauss_hermite(static_cast<int>(deg) + 2);
  HermiteCoeffs h(d);
  for (const auto& alpha : pnd::testing::all_indices(d, deg)) {
    double s = 0.0;
    for_each_tensor_node(rule, d, [&](const Vector& u, double w) {
      double m = eval(p, u);
      for (std::size_t j = 0; j < d; ++j) m *= hermite_1d(alpha[j], u(static_cast<Eigen::Index>(j)));
      s += w * m;
    });
    double fact = 1.0;
    for (unsigned a : alpha)
      for (unsigned k = 2; k <= a; ++k) fact *= k;
    if (std::abs(s / fact) > 1e-11) h.add_term(alpha, s / fact);
  }
  return h;
}

Polynomial valley() {
  return Polynomial(2, {{{2, 2}, 1.0}, {{1, 1}, -2.0}, {{0, 0}, 1.0}, {{0, 2}, 1.0}});
}

}  // namespace

TEST(Hermite, OneDimensionalValues) {
  EXPECT_DOUBLE_EQ(hermite_1d(2, 0.0), -1.0);
  EXPECT_DOUBLE_EQ(hermite_1d(3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite_1d(0, 17.5), 1.0);
  EXPECT_DOUBLE_EQ(hermite_1d(1, -3.0), -3.0);
}

TEST(Hermite, ToHermiteExamples) {
  const HermiteCoeffs expected(2, {{{2, 2}, 1.0}, {{2, 0}, 1.0}, {{0, 2}, 2.0}, {{1, 1}, -2.0}, {{0, 0}, 3.0}});
  EXPECT_LT(to_hermite(valley()).max_abs_diff(expected), 1e-14);

  EXPECT_EQ(to_hermite(Polynomial::monomial({2})), HermiteCoeffs(1, {{{2}, 1.0}, {{0}, 1.0}}));
  EXPECT_EQ(to_hermite(Polynomial::monomial({3})), HermiteCoeffs(1, {{{3}, 1.0}, {{1}, 3.0}}));
}

TEST(Hermite, ProjectionOracleAgrees) {
  EXPECT_LT(hermite_by_projection(Polynomial::monomial({3})).max_abs_diff(to_hermite(Polynomial::monomial({3}))),
            1e-12);
  EXPECT_LT(hermite_by_projection(valley()).max_abs_diff(to_hermite(valley())), 1e-12);
  SplitMix64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = pnd::testing::random_poly(rng, 1 + trial % 2, 5, 3.0);
    EXPECT_LT(hermite_by_projection(p).max_abs_diff(to_hermite(p)), 1e-9);
  }
}

TEST(Hermite, FromHermiteExamples) {
  EXPECT_EQ(from_hermite(HermiteCoeffs(1, {{{2}, 1.0}})), Polynomial(1, {{{2}, 1.0}, {{0}, -1.0}}));
  EXPECT_EQ(from_hermite(HermiteCoeffs::constant(2, 1.0)), Polynomial::constant(2, 1.0));
  EXPECT_LT(from_hermite(to_hermite(valley())).max_abs_diff(valley()), 1e-14);
}

TEST(Hermite, ThetaRescaleExamples) {
  const HermiteCoeffs h(1, {{{2}, 0.5}, {{0}, 1.0}});
  const Polynomial at_half = theta_rescale(h, std::sqrt(0.5));
  EXPECT_LT(at_half.max_abs_diff(Polynomial(1, {{{2}, 2.0}})), 1e-14);
  EXPECT_LT(theta_rescale(h, 1.0).max_abs_diff(Polynomial(1, {{{2}, 0.5}, {{0}, 0.5}})), 1e-15);
  EXPECT_EQ(theta_rescale(HermiteCoeffs::constant(1, 1.0), 0.3), Polynomial::constant(1, 1.0));
  EXPECT_THROW(theta_rescale(h, 0.0), OutOfRange);
  EXPECT_THROW(theta_rescale(h, 1.5), OutOfRange);
}

TEST(Hermite, ThetaRescaleMatchesDefinition) {
  SplitMix64 rng(8);
  const Polynomial p = pnd::testing::random_poly(rng, 2, 4, 2.0);
  const HermiteCoeffs h = to_hermite(p);
  const double theta = 0.7;
  const Polynomial pt = theta_rescale(h, theta);
  for (int k = 0; k < 20; ++k) {
    const Vector x = pnd::testing::random_vector(rng, 2, -3.0, 3.0);
    double direct = 0.0;
    for (const auto& [alpha, c] : h.terms())
      direct += c * std::pow(theta, -static_cast<double>(total_degree(alpha))) *
                hermite_1d(alpha[0], x(0) / theta) * hermite_1d(alpha[1], x(1) / theta);
    EXPECT_NEAR(eval(pt, x), direct, 1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST(HermiteProperty, RoundTrip) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const Polynomial p = pnd::testing::random_poly(rng, d, 1 + trial % 6);
    EXPECT_LE(from_hermite(to_hermite(p)).max_abs_diff(p), 1e-8);
    const HermiteCoeffs h = to_hermite(p);
    EXPECT_LE(to_hermite(from_hermite(h)).max_abs_diff(h), 1e-8);
  }
}

TEST(HermiteProperty, ThetaOneIsFromHermite) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const HermiteCoeffs h = to_hermite(pnd::testing::random_poly(rng, 2, 4));
    EXPECT_EQ(theta_rescale(h, 1.0), from_hermite(h));
  }
}

TEST(HermiteProperty, RecurrenceMatchesExpansion) {
  for (unsigned k = 0; k <= 10; ++k) {
    const Polynomial hk = from_hermite(HermiteCoeffs::monomial({k}));
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double ref = hermite_1d(k, x);
      EXPECT_NEAR(eval(hk, {x}), ref, 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}
