#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hermite.hpp"
#include "minimize.hpp"
#include "quadform.hpp"
#include "quadrature.hpp"

namespace pnd {

struct PndOptions {
  SearchConfig search;
  /// Values of the (normalized) polynomial below -tolerance reject the density.
  double negativity_tolerance = 1e-9;
  bool check_nonnegative = true;
};

/// Polynomial-normal density
///
///   f(x) = c sqrt(det A) / (2 pi)^{d/2} p(x) exp(-(x - b)^T A (x - b) / 2),
///
/// with c = norm_const chosen so that f integrates to one.
class Pnd {
public:
  std::size_t dim() const noexcept { return poly_.dim(); }
  const Polynomial& poly() const noexcept { return poly_; }
  const QuadForm& form() const noexcept { return form_; }
  const Vector& shift() const noexcept { return shift_; }
  double norm_const() const noexcept { return norm_const_; }

  /// u -> c p(L u + b); the density of U = L^{-1}(X - b) is this times the
  /// standard normal density.
  const Polynomial& whitened() const noexcept { return whitened_; }
  /// Hermite coefficients of whitened(); the constant one equals 1.
  const HermiteCoeffs& hermite() const noexcept { return hermite_; }

  friend Pnd make_pnd(const Polynomial& p, const Matrix& a, const Vector& b, const PndOptions& opt);

private:
  Pnd(Polynomial p, QuadForm q, Vector b)
      : poly_(std::move(p)), form_(std::move(q)), shift_(std::move(b)), whitened_(poly_.dim()),
        hermite_(poly_.dim()) {}

  Polynomial poly_;
  QuadForm form_;
  Vector shift_;
  double norm_const_ = 1.0;
  Polynomial whitened_;
  HermiteCoeffs hermite_;
};

/// Builds the density and its normalization constant 1 / beta_0, where beta_0 is the
/// constant Hermite coefficient of p(L u + b). The polynomial is scanned for negative
/// values first.
inline Pnd make_pnd(const Polynomial& p, const Matrix& a, const Vector& b,
                    const PndOptions& opt = {}) {
  const std::size_t d = p.dim();
  if (static_cast<std::size_t>(a.rows()) != d) throw DimensionMismatch(d, a.rows());
  if (static_cast<std::size_t>(b.size()) != d) throw DimensionMismatch(d, b.size());
  if (p.degree() % 2 != 0)
    throw DegreeError("density polynomial must have even degree, got " + std::to_string(p.degree()));

  Pnd out(p, make_quadform(a), b);
  const Matrix& l = out.form_.whitener();
  const Polynomial raw = affine_substitute(p, l, b);
  const HermiteCoeffs h = to_hermite(raw);
  const double beta0 = h.coef(MultiIndex(d, 0u));

  if (opt.check_nonnegative && !raw.is_zero()) {
    const double scale = beta0 > 0.0 ? beta0 : raw.max_abs_coef();
    const SearchResult s = minimize_polynomial(raw * (1.0 / scale), opt.search);
    if (s.value < -opt.negativity_tolerance) {
      const Vector x = l * s.point + b;
      throw NegativeDensity(std::vector<double>(x.data(), x.data() + x.size()), eval(p, x));
    }
  }
  if (!(beta0 > 0.0)) throw ZeroIntegral(beta0);

  out.norm_const_ = 1.0 / beta0;
  out.whitened_ = raw * out.norm_const_;
  out.hermite_ = h * out.norm_const_;
  return out;
}

inline double density(const Pnd& f, const Vector& x) {
  const auto d = static_cast<Eigen::Index>(f.dim());
  if (x.size() != d) throw DimensionMismatch(f.dim(), x.size());
  const Vector r = x - f.shift();
  const double q = r.dot(f.form().matrix() * r);
  const double c = f.norm_const() * std::sqrt(f.form().det()) /
                   std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(d));
  return c * eval(f.poly(), x) * std::exp(-0.5 * q);
}

struct MinPoint {
  Vector point;
  double value = 0.0;
  bool attained = true;
};

/// Best-effort global minimum of the density polynomial p (not normalized).
/// The search runs in whitened coordinates around the shift b.
inline MinPoint find_min_poly(const Pnd& f, const SearchConfig& cfg = {}) {
  const Matrix& l = f.form().whitener();
  const Polynomial raw = affine_substitute(f.poly(), l, f.shift());
  const SearchResult s = minimize_polynomial(raw, cfg);
  MinPoint m;
  m.point = l * s.point + f.shift();
  m.value = eval(f.poly(), m.point);
  m.attained = s.attained;
  return m;
}

/// Integral of the density over the box b +- 8 standard deviations along every
/// whitened axis, by tensor Gauss-Legendre quadrature. Independent of the
/// Hermite route used for norm_const.
inline double box_integral(const Pnd& f, int nodes_per_axis = 0) {
  const int n = nodes_per_axis > 0 ? nodes_per_axis : std::max(64, static_cast<int>(f.poly().degree()) + 20);
  const QuadratureRule rule = gauss_legendre(n, -8.0, 8.0);
  const PolyEvaluator ev(f.whitened());
  const double c = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(f.dim()));
  double s = 0.0;
  for_each_tensor_node(rule, f.dim(), [&](const Vector& u, double w) {
    s += w * ev.value(u) * std::exp(-0.5 * u.squaredNorm());
  });
  return c * s;
}

/// Normal distribution N(mean, cov).
struct Gaussian {
  Vector mean;
  Matrix cov;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

inline Pnd to_pnd(const Gaussian& g) {
  if (g.cov.rows() != g.mean.size()) throw DimensionMismatch(g.mean.size(), g.cov.rows());
  const QuadForm cov = make_quadform(g.cov);
  PndOptions opt;
  opt.check_nonnegative = false;
  return make_pnd(Polynomial::constant(g.dim(), 1.0), cov.inverse(), g.mean, opt);
}

}  // namespace pnd
