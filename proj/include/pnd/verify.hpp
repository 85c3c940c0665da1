#pragma once

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "charfn.hpp"
#include "quadrature.hpp"

namespace pnd {

struct ConvReport {
  std::vector<Vector> grid;
  /// |(g1 * g2)(x) - f(x)| at each grid point.
  std::vector<double> errors;
  double max_abs_error = 0.0;
  int quadrature_order = 0;
};

/// Points of the regular grid {lo + k (hi - lo) / (n - 1)}^dim.
inline std::vector<Vector> uniform_grid(std::size_t dim, double lo, double hi, int n) {
  std::vector<Vector> out;
  std::vector<int> idx(dim, 0);
  const double step = n > 1 ? (hi - lo) / (n - 1) : 0.0;
  while (true) {
    Vector x(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(j)) = lo + idx[j] * step;
    out.push_back(std::move(x));
    std::size_t j = 0;
    while (j < dim && ++idx[j] == n) idx[j++] = 0;
    if (j == dim) break;
  }
  return out;
}

/// Value of the convolution (g1 * g2)(x) = int g1(y) g2(x - y) dy.
///
/// The two Gaussian factors in y merge into one with precision S = A1 + A2 and mean
/// m = S^{-1}(A1 b1 + A2 (x - b2)); the polynomial part p1(y) p2(x - y) is then
/// integrated exactly by an order-n Gauss-Hermite rule under N(m, S^{-1}).
inline double convolution_at(const Pnd& g1, const Pnd& g2, const Vector& x, const QuadratureRule& rule) {
  const std::size_t d = g1.dim();
  const Matrix& a1 = g1.form().matrix();
  const Matrix& a2 = g2.form().matrix();
  const Matrix s = a1 + a2;
  const Eigen::LLT<Matrix> llt(s);
  const Vector z = x - g2.shift();
  const Vector m = llt.solve(a1 * g1.shift() + a2 * z);
  const double k = g1.shift().dot(a1 * g1.shift()) + z.dot(a2 * z) - m.dot(s * m);
  // y = m + C^{-T} u with S = C C^T gives y ~ N(m, S^{-1}) for u standard normal.
  const Matrix c_inv_t = llt.matrixU().solve(Matrix::Identity(s.rows(), s.cols()));
  const PolyEvaluator e1(g1.poly()), e2(g2.poly());
  double acc = 0.0;
  for_each_tensor_node(rule, d, [&](const Vector& u, double w) {
    const Vector y = m + c_inv_t * u;
    acc += w * e1.value(y) * e2.value(Vector(x - y));
  });
  const double half_d = 0.5 * static_cast<double>(d);
  const double det_s = std::pow(llt.matrixL().determinant(), 2);
  const double c1 = g1.norm_const() * std::sqrt(g1.form().det()) / std::pow(2.0 * std::numbers::pi, half_d);
  const double c2 = g2.norm_const() * std::sqrt(g2.form().det()) / std::pow(2.0 * std::numbers::pi, half_d);
  return c1 * c2 * std::exp(-0.5 * k) * std::pow(2.0 * std::numbers::pi, half_d) / std::sqrt(det_s) * acc;
}

/// Compares f with g1 * g2 on the grid. order = 0 selects combined degree + 20.
inline ConvReport convolution_check(const Pnd& f, const Pnd& g1, const Pnd& g2, const std::vector<Vector>& grid,
                                    int order = 0) {
  if (g1.dim() != f.dim()) throw DimensionMismatch(f.dim(), g1.dim());
  if (g2.dim() != f.dim()) throw DimensionMismatch(f.dim(), g2.dim());
  const int degree = static_cast<int>(g1.poly().degree() + g2.poly().degree());
  if (order == 0) order = degree + 20;
  if (order <= degree) throw QuadratureOrderTooLow(order, degree);
  const QuadratureRule rule = gauss_hermite(order);
  ConvReport r;
  r.grid = grid;
  r.quadrature_order = order;
  for (const Vector& x : grid) {
    const double e = std::abs(convolution_at(g1, g2, x, rule) - density(f, x));
    r.errors.push_back(e);
    r.max_abs_error = std::max(r.max_abs_error, e);
  }
  return r;
}

/// The two-dimensional counterexample: phi = (1/3) P(t) exp(-|t|^2/2) with
/// P = t1^2 t2^2 + 2 t1 t2 - 2 t2^2 - t1^2 + 3, split as phi1 phi2 where phi1 keeps P
/// and the exponent matrix S = [[a11, a12], [a12, a22]] and phi2 is normal with
/// covariance I - S. phi1 is not a characteristic function: its associated
/// polynomial takes negative values.
namespace counterexample {

struct Params {
  double a11 = 0.5;
  double a12 = 0.1;
  double a22 = 0.5;

  double det() const { return a11 * a22 - a12 * a12; }

  /// Throws ConstraintViolation naming the first inequality that fails.
  void validate() const {
    if (!(a11 > 0.0)) throw ConstraintViolation("a11 > 0");
    if (!(a22 > 0.0)) throw ConstraintViolation("a22 > 0");
    if (!(det() > 0.0)) throw ConstraintViolation("a11*a22 - a12^2 > 0");
    if (!(1.0 - a11 > 0.0)) throw ConstraintViolation("1 - a11 > 0");
    if (!(1.0 - a22 > 0.0)) throw ConstraintViolation("1 - a22 > 0");
    if (!((1.0 - a11) * (1.0 - a22) - a12 * a12 > 0.0))
      throw ConstraintViolation("(1 - a11)(1 - a22) - a12^2 > 0");
  }

  Matrix exponent() const {
    Matrix s(2, 2);
    s << a11, a12, a12, a22;
    return s;
  }
};

/// (x1 x2 - 1)^2 + x2^2.
inline Polynomial valley() {
  return Polynomial(2, {{{2, 2}, 1.0}, {{1, 1}, -2.0}, {{0, 0}, 1.0}, {{0, 2}, 1.0}});
}

/// t1^2 t2^2 + 2 t1 t2 - 2 t2^2 - t1^2 + 3, the polynomial factor in expanded form.
inline Polynomial cf_polynomial() {
  return Polynomial(2, {{{2, 2}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, -2.0}, {{2, 0}, -1.0}, {{0, 0}, 3.0}});
}

/// Closed-form coefficient of n^2 along the witness curve as printed with the
/// counterexample (a12 replaced by |a12|).
inline double printed_curve_coefficient(const Params& p) {
  p.validate();
  if (p.a12 == 0.0) throw ConstraintViolation("a12 != 0 (the a12 = 0 case uses the X-axis)");
  const double a = std::abs(p.a12);
  const double d = p.a11 * p.a22 - a * a;
  return p.a22 / a - a / p.a22 - 1.0 / a - a / d;
}

/// Re-derived closed form of the same coefficient for a12 > 0: (a22 - 1)/a12 - a12/D.
/// It differs from the printed one by a12/a22.
inline double derived_curve_coefficient(const Params& p) {
  p.validate();
  if (!(p.a12 > 0.0)) throw ConstraintViolation("a12 > 0");
  return (p.a22 - 1.0) / p.a12 - p.a12 / p.det();
}

/// phi1: the polynomial part of phi with the exponent matrix S.
inline CharFn candidate_cf(const Params& p) {
  p.validate();
  const CharFn full = forward_cf(make_pnd(valley(), Matrix::Identity(2, 2), Vector::Zero(2)));
  return make_charfn(full.beta(), p.exponent(), Vector::Zero(2));
}

/// Inverse transform of phi1 without the nonnegativity check.
inline DensityParts candidate_density(const Params& p) { return inverse_cf_parts(candidate_cf(p)); }

/// Point n of the witness curve in (x1, x2) coordinates, using |a12| for the curve
/// scales:  X = n sqrt(D / |a12|),  Y = (n - 1/n) sqrt(|a12|),
///          x2 = Y sqrt(a22),  x1 = X sqrt(a11 - a12^2 / a22) + (a12 / a22) x2.
/// For a12 = 0 the curve is the x1-axis, x1 = n sqrt(a11).
inline Vector curve_point(const Params& p, double n) {
  Vector x(2);
  if (p.a12 == 0.0) {
    x << n * std::sqrt(p.a11), 0.0;
    return x;
  }
  const double a = std::abs(p.a12);
  const double big_x = n * std::sqrt(p.det() / a);
  const double big_y = (n - 1.0 / n) * std::sqrt(a);
  const double x2 = big_y * std::sqrt(p.a22);
  x << big_x * std::sqrt(p.a11 - p.a12 * p.a12 / p.a22) + p.a12 / p.a22 * x2, x2;
  return x;
}

/// 3 f1(curve(n)) fitted as B n^2 + C + E / n^2 from n = 8, 16, 32; returns B.
inline double extracted_curve_coefficient(const Params& p) {
  p.validate();
  if (!(p.a12 > 0.0)) throw ConstraintViolation("a12 > 0");
  const Polynomial f1 = candidate_density(p).poly;
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  int row = 0;
  for (double n : {8.0, 16.0, 32.0}) {
    m.row(row) << n * n, 1.0, 1.0 / (n * n);
    rhs(row) = 3.0 * eval(f1, curve_point(p, n));
    ++row;
  }
  return m.fullPivLu().solve(rhs)(0);
}

struct Witness {
  Vector point;
  /// f1 polynomial value; its sign is the sign of the signed density.
  double poly_value = 0.0;
  double density_value = 0.0;
  /// Curve index n, or 0 when found by the fallback search off the curve.
  int n = 0;
};

inline double signed_density(const DensityParts& parts, const Vector& x) {
  const QuadForm q = make_quadform(parts.precision);
  const Vector r = x - parts.shift;
  return std::sqrt(q.det()) / (2.0 * std::numbers::pi) * eval(parts.poly, x) * std::exp(-0.5 * r.dot(q.matrix() * r));
}

/// First curve point (n = 1..n_max) where f1 < -1e-10. For a12 < 0 both x2 signs of
/// the curve are tried.
inline Witness negative_witness(const Params& p, int n_max = 50) {
  p.validate();
  const DensityParts parts = candidate_density(p);
  for (int n = 1; n <= n_max; ++n) {
    const Vector c = curve_point(p, n);
    std::vector<Vector> tries{c};
    if (p.a12 < 0.0) tries.push_back(Vector{{c(0), -c(1)}});
    for (const Vector& x : tries) {
      const double v = eval(parts.poly, x);
      if (v < -1e-10) return {x, v, signed_density(parts, x), n};
    }
  }
  throw NoWitnessFound(n_max);
}

/// Rows (x1, x2, f1 density) along the curve for n = 1..n_max.
inline std::vector<std::array<double, 3>> curve_slice(const Params& p, int n_max = 50) {
  const DensityParts parts = candidate_density(p);
  std::vector<std::array<double, 3>> rows;
  for (int n = 1; n <= n_max; ++n) {
    const Vector x = curve_point(p, n);
    rows.push_back({x(0), x(1), signed_density(parts, x)});
  }
  return rows;
}

}  // namespace counterexample

struct ProbeResult {
  /// Sum of squared coefficient differences between P and the product.
  double residual = 0.0;
  Polynomial factor1{2};
  Polynomial factor2{2};
  int starts = 0;
};

namespace detail {

/// Monomials of a general bivariate quadratic, in parameter order
/// t1^2, t2^2, t1 t2, t1, t2, 1.
inline const std::array<MultiIndex, 6>& quadratic_basis() {
  static const std::array<MultiIndex, 6> b{MultiIndex{2, 0}, MultiIndex{0, 2}, MultiIndex{1, 1},
                                           MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{0, 0}};
  return b;
}

inline Polynomial quadratic_from(const double* c) {
  Polynomial q(2);
  for (int i = 0; i < 6; ++i) q.add_term(quadratic_basis()[i], c[i], 0.0);
  return q;
}

}  // namespace detail

/// Multistart Levenberg-Marquardt fit of P ~ Q1 Q2 over two general quadratics in
/// (t1, t2). A large best residual is evidence, not proof, that P does not factor.
inline ProbeResult biquadratic_factor_probe(const Polynomial& target, int starts = 200, std::uint64_t seed = 0,
                                            int max_iter = 400) {
  if (target.dim() != 2) throw DimensionMismatch(2, target.dim());
  if (target.degree() != 4) throw DegreeError("factor probe needs a quartic");
  const auto& basis = detail::quadratic_basis();
  // Coefficient slots: every monomial of degree <= 4 in two variables.
  std::vector<MultiIndex> slots;
  for (unsigned k = 0; k <= 4; ++k)
    for (unsigned i = 0; i <= k; ++i) slots.push_back({i, k - i});
  auto slot_of = [&](const MultiIndex& a) {
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (slots[s] == a) return static_cast<Eigen::Index>(s);
    return Eigen::Index{-1};
  };
  Vector want(static_cast<Eigen::Index>(slots.size()));
  for (std::size_t s = 0; s < slots.size(); ++s) want(static_cast<Eigen::Index>(s)) = target.coef(slots[s]);
  // prod_slot[i][j]: slot of basis[i] + basis[j].
  std::array<std::array<Eigen::Index, 6>, 6> prod_slot{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) prod_slot[i][j] = slot_of({basis[i][0] + basis[j][0], basis[i][1] + basis[j][1]});

  auto residual = [&](const Vector& th, Vector& r, Matrix* jac) {
    r = -want;
    if (jac) jac->setZero(want.size(), 12);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Eigen::Index s = prod_slot[i][j];
        r(s) += th(i) * th(6 + j);
        if (jac) {
          (*jac)(s, i) += th(6 + j);
          (*jac)(s, 6 + j) += th(i);
        }
      }
  };

  const double scale = std::sqrt(std::max(1.0, target.max_abs_coef()));
  SplitMix64 rng(seed);
  ProbeResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.starts = starts;
  Vector r, r_new;
  Matrix jac;
  for (int s = 0; s < starts; ++s) {
    Vector th(12);
    for (Eigen::Index i = 0; i < 12; ++i) th(i) = scale * rng.normal();
    residual(th, r, &jac);
    double f = r.squaredNorm();
    double lambda = 1e-3;
    for (int it = 0; it < max_iter && f > 1e-28; ++it) {
      const Matrix jtj = jac.transpose() * jac;
      const Vector g = jac.transpose() * r;
      bool accepted = false;
      for (int tries = 0; tries < 30; ++tries) {
        Matrix m = jtj;
        m.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
        const Vector step = m.ldlt().solve(-g);
        const Vector th_new = th + step;
        residual(th_new, r_new, nullptr);
        const double f_new = r_new.squaredNorm();
        if (f_new < f) {
          th = th_new;
          f = f_new;
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 10.0;
      }
      if (!accepted) break;
      residual(th, r, &jac);
    }
    if (f < best.residual) {
      best.residual = f;
      best.factor1 = detail::quadratic_from(th.data());
      best.factor2 = detail::quadratic_from(th.data() + 6);
    }
  }
  return best;
}

}  // namespace pnd
