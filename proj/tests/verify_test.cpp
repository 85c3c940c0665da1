#include <gtest/gtest.h>

#include <pnd/decompose.hpp>
#include <pnd/verify.hpp>

#include "support.hpp"

using namespace pnd;
namespace ce = pnd::counterexample;

namespace {

Pnd normal_1d(double variance) {
  return to_pnd(Gaussian{Vector::Zero(1), Matrix::Constant(1, 1, variance)});
}

/// Rejection sample of a parameter triple satisfying every constraint.
ce::Params sample_params(SplitMix64& rng, bool positive_a12) {
  while (true) {
    ce::Params p{rng.uniform(0.0, 1.0), rng.uniform(positive_a12 ? 0.0 : -1.0, 1.0), rng.uniform(0.0, 1.0)};
    if (p.a12 == 0.0) continue;
    try {
      p.validate();
      return p;
    } catch (const ConstraintViolation&) {
    }
  }
}

/// Exact rationals of f1 for (0.5, 0.1, 0.5), expanded symbolically from the inverse
/// transform of the candidate.
Polynomial f1_reference() {
  return Polynomial(2, {{{4, 0}, 15625.0 / 62208.0},
                        {{3, 1}, -40625.0 / 15552.0},
                        {{2, 2}, 75625.0 / 10368.0},
                        {{2, 0}, -425.0 / 288.0},
                        {{1, 3}, -40625.0 / 15552.0},
                        {{1, 1}, 25.0 / 144.0},
                        {{0, 4}, 15625.0 / 62208.0},
                        {{0, 2}, -25.0 / 288.0},
                        {{0, 0}, 29.0 / 144.0}});
}

Polynomial random_quadratic(SplitMix64& rng) {
  Polynomial q(2);
  for (const MultiIndex& a : detail::quadratic_basis()) q.add_term(a, rng.uniform(-2.0, 2.0));
  return q;
}

}  // namespace

TEST(Convolution, GaussianIdentity) {
  const double th = 0.8;
  const ConvReport r = convolution_check(normal_1d(1.0), normal_1d(th * th), normal_1d(1.0 - th * th),
                                         uniform_grid(1, -2.0, 2.0, 3));
  ASSERT_EQ(r.grid.size(), 3u);
  EXPECT_EQ(r.quadrature_order, 20);
  EXPECT_LE(r.max_abs_error, 1e-10);
}

TEST(Convolution, OneDimensionalFactors) {
  const Pnd f = make_pnd(Polynomial(1, {{{2}, 0.5}, {{0}, 0.5}}), Matrix::Identity(1, 1), Vector::Zero(1));
  const Decomposition dc = decompose(f, std::sqrt(0.5));
  const ConvReport r = convolution_check(f, dc.factor_y, to_pnd(dc.factor_z), uniform_grid(1, -4.0, 4.0, 21));
  EXPECT_EQ(r.errors.size(), 21u);
  EXPECT_LE(r.max_abs_error, 1e-6);
}

TEST(Convolution, WrongVarianceIsDetected) {
  const double th = 0.8;
  const ConvReport r = convolution_check(normal_1d(1.0), normal_1d(th * th), normal_1d(1.0 - th * th + 0.1),
                                         uniform_grid(1, -2.0, 2.0, 3));
  EXPECT_GT(r.max_abs_error, 1e-3);
}

TEST(Convolution, ShiftedTwoDimensionalGaussians) {
  // N(b1, S1) * N(b2, S2) = N(b1 + b2, S1 + S2).
  SplitMix64 rng(71);
  const Matrix s1 = pnd::testing::random_spd(rng, 2), s2 = pnd::testing::random_spd(rng, 2);
  const Vector b1 = pnd::testing::random_vector(rng, 2, -1.0, 1.0), b2 = pnd::testing::random_vector(rng, 2, -1.0, 1.0);
  const ConvReport r = convolution_check(to_pnd(Gaussian{b1 + b2, s1 + s2}), to_pnd(Gaussian{b1, s1}),
                                         to_pnd(Gaussian{b2, s2}), uniform_grid(2, -3.0, 3.0, 5));
  EXPECT_LE(r.max_abs_error, 1e-12);
}

TEST(Convolution, OrderMustExceedDegree) {
  const Pnd f = make_pnd(Polynomial(1, {{{2}, 0.5}, {{0}, 0.5}}), Matrix::Identity(1, 1), Vector::Zero(1));
  const Decomposition dc = decompose(f, std::sqrt(0.5));
  const auto grid = uniform_grid(1, -1.0, 1.0, 3);
  EXPECT_THROW(convolution_check(f, dc.factor_y, to_pnd(dc.factor_z), grid, 2), QuadratureOrderTooLow);
  EXPECT_NO_THROW(convolution_check(f, dc.factor_y, to_pnd(dc.factor_z), grid, 3));
  EXPECT_THROW(convolution_check(f, normal_1d(1.0), to_pnd(Gaussian{Vector::Zero(2), Matrix::Identity(2, 2)}), grid),
               DimensionMismatch);
}

TEST(Convolution, UniformGridLayout) {
  const auto g = uniform_grid(2, -4.0, 4.0, 5);
  ASSERT_EQ(g.size(), 25u);
  EXPECT_EQ(g.front(), (Vector{{-4.0, -4.0}}));
  EXPECT_EQ(g.back(), (Vector{{4.0, 4.0}}));
  EXPECT_EQ(g[1], (Vector{{-2.0, -4.0}}));
}

TEST(Counterexample, ParamsValidateNamesConstraint) {
  EXPECT_NO_THROW(ce::Params{}.validate());
  try {
    ce::Params{0.5, 0.8, 0.5}.validate();
    FAIL() << "accepted a12 = 0.8";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "a11*a22 - a12^2 > 0");
  }
  EXPECT_THROW(ce::Params({1.0, 0.0, 0.5}).validate(), ConstraintViolation);
  EXPECT_THROW(ce::Params({0.5, 0.0, -0.1}).validate(), ConstraintViolation);
  EXPECT_THROW(ce::Params({0.5, 0.6, 0.9}).validate(), ConstraintViolation);
}

TEST(Counterexample, PrintedCoefficientDefault) {
  EXPECT_NEAR(ce::printed_curve_coefficient({}), -337.0 / 60.0, 1e-12);
  EXPECT_NEAR(ce::printed_curve_coefficient({}), -5.6167, 1e-4);
  EXPECT_NEAR(ce::printed_curve_coefficient({0.6, 0.2, 0.7}), 0.7 / 0.2 - 0.2 / 0.7 - 5.0 - 0.2 / 0.38, 1e-12);
  // (1 - 0.9)^2 < 0.2^2.
  try {
    ce::printed_curve_coefficient({0.9, 0.2, 0.9});
    FAIL() << "accepted (0.9, 0.2, 0.9)";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "(1 - a11)(1 - a22) - a12^2 > 0");
  }
  EXPECT_THROW(ce::printed_curve_coefficient({0.5, 0.8, 0.5}), ConstraintViolation);
  EXPECT_THROW(ce::printed_curve_coefficient({0.5, 0.0, 0.5}), ConstraintViolation);
}

TEST(Counterexample, CandidateDensityMatchesExactExpansion) {
  const DensityParts parts = ce::candidate_density({});
  EXPECT_LE(parts.poly.max_abs_diff(f1_reference()), 1e-12);
  EXPECT_LE(parts.shift.cwiseAbs().maxCoeff(), 0.0);
  // Precision is (S)^{-1} for the exponent matrix S.
  EXPECT_LE((parts.precision * ce::Params{}.exponent() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Counterexample, CandidateIsRejectedAsDensity) {
  EXPECT_THROW(inverse_cf(ce::candidate_cf({})), NegativeDensity);
}

TEST(Counterexample, CurveCoefficientRegression) {
  // Values of 3 f1 along the curve fitted from the exact expansion:
  // -65 n^2 / 12 + 31 / 16 - 1 / (60 n^2) at the default triple.
  EXPECT_NEAR(ce::extracted_curve_coefficient({}), -65.0 / 12.0, 1e-6);
  EXPECT_NEAR(ce::derived_curve_coefficient({}), -65.0 / 12.0, 1e-12);
  // Symbolic oracle at (3/5, 1/5, 7/10): -77/38.
  EXPECT_NEAR(ce::extracted_curve_coefficient({0.6, 0.2, 0.7}), -77.0 / 38.0, 1e-6);
  EXPECT_NEAR(ce::derived_curve_coefficient({0.6, 0.2, 0.7}), -77.0 / 38.0, 1e-12);
  const Polynomial f1 = f1_reference();
  for (double n : {1.0, 3.0, 7.0}) {
    EXPECT_NEAR(3.0 * eval(f1, ce::curve_point({}, n)), -65.0 * n * n / 12.0 + 31.0 / 16.0 - 1.0 / (60.0 * n * n),
                1e-9 * n * n);
  }
}

TEST(CounterexampleProperty, PrintedCoefficientNegative) {
  SplitMix64 rng(81);
  for (int k = 0; k < 500; ++k) {
    const ce::Params p = sample_params(rng, false);
    EXPECT_LT(ce::printed_curve_coefficient(p), 0.0) << p.a11 << ' ' << p.a12 << ' ' << p.a22;
  }
}

// The printed closed form sits a12 / a22 below the coefficient read off the curve.
TEST(CounterexampleProperty, PrintedVersusExtracted) {
  SplitMix64 rng(82);
  for (int k = 0; k < 100; ++k) {
    const ce::Params p = sample_params(rng, true);
    if (p.det() < 1e-3 || p.a12 < 1e-3) continue;
    const double extracted = ce::extracted_curve_coefficient(p);
    const double derived = ce::derived_curve_coefficient(p);
    EXPECT_NEAR(extracted, derived, 1e-6 * std::max(1.0, std::abs(derived)));
    EXPECT_LT(derived, 0.0);
    EXPECT_NEAR(ce::printed_curve_coefficient(p) - extracted, -p.a12 / p.a22,
                1e-6 * std::max(1.0, std::abs(derived)));
  }
}

TEST(Counterexample, WitnessRegression) {
  const ce::Witness w = ce::negative_witness({}, 50);
  EXPECT_EQ(w.n, 1);
  EXPECT_NEAR(w.point(0), 1.0733126291998991, 1e-12);
  EXPECT_NEAR(w.point(1), 0.0, 1e-15);
  EXPECT_NEAR(w.poly_value, -1.1652777777777779, 1e-10);
  EXPECT_LT(w.density_value, 0.0);
}

TEST(Counterexample, AxisBranchWhenUncoupled) {
  const ce::Params p{0.5, 0.0, 0.5};
  const ce::Witness w = ce::negative_witness(p, 50);
  EXPECT_EQ(w.point(1), 0.0);
  EXPECT_LT(w.poly_value, 0.0);
  EXPECT_NEAR(w.point(0), w.n * std::sqrt(0.5), 1e-15);
}

TEST(Counterexample, WitnessErrors) {
  EXPECT_THROW(ce::negative_witness({0.5, 0.8, 0.5}), ConstraintViolation);
  // Scanning no curve points cannot find anything.
  EXPECT_THROW(ce::negative_witness({}, 0), NoWitnessFound);
}

TEST(CounterexampleProperty, WitnessOnSampledTriples) {
  SplitMix64 rng(83);
  for (int k = 0; k < 20; ++k) {
    const ce::Params p = sample_params(rng, false);
    const ce::Witness w = ce::negative_witness(p, 50);
    EXPECT_LT(w.poly_value, -1e-10);
    EXPECT_LT(eval(ce::candidate_density(p).poly, w.point), 0.0);
  }
}

TEST(Counterexample, CurveSliceHasNegativeRows) {
  const auto rows = ce::curve_slice({}, 10);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) EXPECT_LT(r[2], 0.0);
}

TEST(Probe, KnownFactorizations) {
  const Polynomial sep(2, {{{2, 2}, 1.0}, {{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, 1.0}});
  const ProbeResult a = biquadratic_factor_probe(sep, 50);
  EXPECT_LE(a.residual, 1e-10);
  EXPECT_LE((a.factor1 * a.factor2).max_abs_diff(sep), 1e-5);

  const Polynomial sq = Polynomial(2, {{{1, 1}, 1.0}, {{0, 0}, 1.0}}) * Polynomial(2, {{{1, 1}, 1.0}, {{0, 0}, 1.0}});
  EXPECT_LE(biquadratic_factor_probe(sq, 50).residual, 1e-10);
}

TEST(Probe, CounterexamplePolynomialDoesNotFactor) {
  const ProbeResult r = biquadratic_factor_probe(ce::cf_polynomial(), 200);
  EXPECT_EQ(r.starts, 200);
  EXPECT_GT(r.residual, 1e-3);
}

TEST(Probe, Deterministic) {
  const ProbeResult a = biquadratic_factor_probe(ce::cf_polynomial(), 10, 5);
  const ProbeResult b = biquadratic_factor_probe(ce::cf_polynomial(), 10, 5);
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.factor1, b.factor1);
}

TEST(Probe, RejectsWrongShape) {
  EXPECT_THROW(biquadratic_factor_probe(Polynomial::monomial({4})), DimensionMismatch);
  EXPECT_THROW(biquadratic_factor_probe(Polynomial::monomial({2, 0})), DegreeError);
}

TEST(ProbeProperty, RandomProductsFactor) {
  SplitMix64 rng(84);
  for (int k = 0; k < 50; ++k) {
    const Polynomial target = random_quadratic(rng) * random_quadratic(rng);
    EXPECT_LE(biquadratic_factor_probe(target, 20, static_cast<std::uint64_t>(k)).residual, 1e-8) << k;
  }
}

TEST(ConvolutionProperty, ThreeDimensionalDecomposition) {
  SplitMix64 rng(85);
  Polynomial p = pnd::testing::random_sos(rng, 3, 1, 2);
  for (unsigned j = 0; j < 3; ++j) {
    MultiIndex a(3, 0u);
    a[j] = 2;
    p.add_term(a, 0.5);
  }
  p.add_term(MultiIndex(3, 0u), 0.5);
  const Pnd f = make_pnd(p, pnd::testing::random_spd(rng, 3), pnd::testing::random_vector(rng, 3, -0.5, 0.5));
  const Decomposition dc = decompose(f);
  const ConvReport r = convolution_check(f, dc.factor_y, to_pnd(dc.factor_z), uniform_grid(3, -4.0, 4.0, 3));
  EXPECT_LE(r.max_abs_error, 1e-5);
}
