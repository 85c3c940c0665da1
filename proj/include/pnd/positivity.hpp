#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "minimize.hpp"
#include "polynomial.hpp"

namespace pnd {

/// Leading-coefficient and infimum data for a polynomial Q of even degree 2m.
///
///   b      = inf_x Q(x) / (1 + sum_j x_j^{2m})          (inf_b)
///   a     >= b / ((1 + E)(1 + d)^{2m})                   (inf_a_lower)
///
/// where a is the infimum of Q(x) / (1 + sum_{|alpha| <= 2m} |x^alpha|) and E counts
/// the multi-indices with |alpha| <= 2m. Any W whose coefficients stay within
/// epsilon of those of Q (degree <= 2m) is positive.
struct PositivityReport {
  bool axis_condition = false;
  std::vector<double> leading_coeffs;
  double inf_b = 0.0;
  double inf_a_lower = 0.0;
  double epsilon = 0.0;
  double search_radius = 0.0;
  /// Number of multi-indices alpha in d variables with |alpha| <= 2m.
  double index_count = 0.0;
  /// min_j leading_coeffs[j] / 3; beyond search_radius the lower-order terms are
  /// bounded by this share of the top-degree part.
  double tail_bound = 0.0;
};

/// Coefficient of x_j^{2m} for each j, where 2m is the total degree.
inline std::vector<double> leading_axis_coeffs(const Polynomial& p) {
  const unsigned deg = p.degree();
  if (deg % 2 != 0) throw DegreeError("leading axis coefficients need even degree, got " + std::to_string(deg));
  std::vector<double> out(p.dim(), 0.0);
  for (std::size_t j = 0; j < p.dim(); ++j) {
    MultiIndex a(p.dim(), 0u);
    a[j] = deg;
    out[j] = p.coef(a);
  }
  return out;
}

inline constexpr double kLeadingThreshold = 1e-12;

/// Every x_j^{2m} coefficient is strictly positive (above kLeadingThreshold).
inline bool check_axis_condition(const Polynomial& p) {
  const auto c = leading_axis_coeffs(p);
  return std::all_of(c.begin(), c.end(), [](double v) { return v > kLeadingThreshold; });
}

/// Binomial(2m + d, d).
inline double index_count(std::size_t dim, unsigned degree) {
  double r = 1.0;
  for (std::size_t k = 1; k <= dim; ++k) r = r * static_cast<double>(degree + k) / static_cast<double>(k);
  return std::round(r);
}

/// Radius beyond which (in l1 norm) Q is dominated by its axis-leading terms:
/// (1 + d)^{2m} sum_{|alpha| < 2m} |a_alpha| / (1 + R)^{2m - |alpha|} <= b0 / 3, and
/// R >= d (2/d)^{1/(2m)}. The first is solved by bisection.
inline double tail_radius(const Polynomial& p) {
  const auto lead = leading_axis_coeffs(p);
  const double b0 = *std::min_element(lead.begin(), lead.end());
  if (!(b0 > kLeadingThreshold)) throw ConditionFailed("an axis-leading coefficient is not positive");
  const unsigned deg = p.degree();
  if (deg == 0) return 0.0;
  const double d = static_cast<double>(p.dim());
  const double lift = std::pow(1.0 + d, deg);
  auto excess = [&](double r) {
    double s = 0.0;
    for (const auto& [alpha, c] : p.terms()) {
      const unsigned k = total_degree(alpha);
      if (k < deg) s += std::abs(c) / std::pow(1.0 + r, deg - k);
    }
    return lift * s - b0 / 3.0;
  };
  double lo = 0.0, hi = 1.0;
  if (excess(lo) > 0.0) {
    while (excess(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
  } else {
    hi = 0.0;
  }
  return std::max(hi, d * std::pow(2.0 / d, 1.0 / deg));
}

namespace detail {

/// h(x) = Q(x) / D(x) with D = 1 + sum_j x_j^{2m}, plus derivatives for Newton.
class RatioObjective {
public:
  explicit RatioObjective(const Polynomial& q) : num_(q), deg_(q.degree()) {}

  double value(const Vector& x) const {
    return num_.value(x) / denominator(x);
  }

  void operator()(const Vector& x, double& f, Vector* g, Matrix* h) const {
    const Eigen::Index d = x.size();
    double q = 0.0;
    Vector gq(d);
    Matrix hq(d, d);
    num_.evaluate(x, q, g ? &gq : nullptr, h ? &hq : nullptr);
    const double den = denominator(x);
    f = q / den;
    if (!g && !h) return;
    const double k = deg_;
    Vector gd(d), hd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      gd(j) = k * std::pow(x(j), k - 1.0);
      hd(j) = k * (k - 1.0) * std::pow(x(j), k - 2.0);
    }
    if (!g) num_.evaluate(x, q, &gq, nullptr);
    const Vector gr = (gq - f * gd) / den;
    if (g) *g = gr;
    if (h) {
      Matrix m = hq;
      m.diagonal() -= f * hd;
      m -= gr * gd.transpose() + gd * gr.transpose();
      *h = m / den;
    }
  }

private:
  double denominator(const Vector& x) const {
    double s = 1.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) s += std::pow(x(j), static_cast<double>(deg_));
    return s;
  }

  PolyEvaluator num_;
  unsigned deg_;
};

/// Calls f(x) on the grid {-R + kR/n}^d restricted to the closed l1 ball of radius R.
template <class F>
void for_each_ball_point(std::size_t dim, double radius, int n, F&& f) {
  std::vector<int> idx(dim, -n);
  Vector x(static_cast<Eigen::Index>(dim));
  const double step = radius / n;
  while (true) {
    int l1 = 0;
    for (std::size_t j = 0; j < dim; ++j) l1 += std::abs(idx[j]);
    if (l1 <= n) {
      for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(j)) = idx[j] * step;
      f(static_cast<const Vector&>(x));
    }
    std::size_t j = 0;
    while (j < dim && ++idx[j] > n) idx[j++] = -n;
    if (j == dim) break;
  }
}

struct GridMin {
  double value;
  std::vector<Vector> best;
};

/// Grid minimum of the ratio over the l1 ball, halving the step until the minimum
/// changes by less than 1e-4 relative or the grid exceeds max_points.
inline GridMin ball_grid_min(const RatioObjective& h, std::size_t dim, double radius,
                             std::size_t max_points = std::size_t{1} << 18, std::size_t keep = 8) {
  GridMin out{std::numeric_limits<double>::infinity(), {}};
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 4;; n *= 2) {
    std::vector<std::pair<double, Vector>> top;
    double m = std::numeric_limits<double>::infinity();
    for_each_ball_point(dim, radius, n, [&](const Vector& x) {
      const double v = h.value(x);
      m = std::min(m, v);
      if (top.size() < keep || v < top.back().first) {
        top.emplace_back(v, x);
        std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (top.size() > keep) top.pop_back();
      }
    });
    out.value = m;
    out.best.clear();
    for (auto& [v, x] : top) out.best.push_back(x);
    const bool converged = std::abs(m - previous) <= 1e-4 * std::max(std::abs(m), 1e-300);
    previous = m;
    const double next_points = std::pow(4.0 * n + 1.0, static_cast<double>(dim));
    if (converged || next_points > static_cast<double>(max_points)) break;
  }
  return out;
}

/// inf over directions v of Q_top(v) / sum_j v_j^{2m}, on a grid of the faces of the
/// unit sup-norm sphere. This is the limit of the ratio along rays.
inline double directional_limit(const Polynomial& top, unsigned deg, std::size_t dim,
                                std::size_t budget = std::size_t{1} << 16) {
  const PolyEvaluator ev(top);
  const double per_face = static_cast<double>(budget) / (2.0 * static_cast<double>(dim));
  const int n = dim == 1 ? 0 : std::max(1, static_cast<int>((std::pow(per_face, 1.0 / (dim - 1)) - 1.0) / 2.0));
  double m = std::numeric_limits<double>::infinity();
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t face = 0; face < dim; ++face) {
    for (double sign : {-1.0, 1.0}) {
      std::vector<int> idx(dim, -n);
      while (true) {
        for (std::size_t j = 0; j < dim; ++j)
          v(static_cast<Eigen::Index>(j)) = j == face ? sign : (n == 0 ? 0.0 : static_cast<double>(idx[j]) / n);
        double s = 0.0;
        for (Eigen::Index j = 0; j < v.size(); ++j) s += std::pow(v(j), static_cast<double>(deg));
        m = std::min(m, ev.value(v) / s);
        std::size_t j = 0;
        while (j < dim && (j == face || ++idx[j] > n)) {
          if (j != face) idx[j] = -n;
          ++j;
        }
        if (j == dim) break;
      }
    }
  }
  return m;
}

}  // namespace detail

struct InfEstimate {
  double inf_b = 0.0;
  double radius = 0.0;
};

/// Numerical estimate of inf Q(x) / (1 + sum_j x_j^{2m}): the smallest of a refined
/// grid over the l1 ball of radius tail_radius(Q), Newton polishing of the best grid
/// points, an expanding-box multistart search and the limit along rays.
inline InfEstimate estimate_inf_b(const Polynomial& p, const SearchConfig& cfg = {}) {
  if (!check_axis_condition(p)) throw ConditionFailed("an axis-leading coefficient is not positive");
  const std::size_t d = p.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const unsigned deg = p.degree();
  InfEstimate est;
  // A constant c has ratio c / (1 + d) everywhere.
  if (deg == 0) {
    est.inf_b = p.coef(MultiIndex(d, 0u)) / (1.0 + static_cast<double>(d));
    return est;
  }
  est.radius = tail_radius(p);

  const detail::RatioObjective h(p);
  const detail::GridMin grid = detail::ball_grid_min(h, d, est.radius);
  double best = grid.value;

  const Vector lo = Vector::Constant(n, -2.0 * est.radius);
  const Vector hi = Vector::Constant(n, 2.0 * est.radius);
  for (const Vector& x0 : grid.best) best = std::min(best, minimize_in_box(h, x0, lo, hi, cfg.max_iter).value);
  best = std::min(best, multistart_minimize(h, d, cfg).value);

  best = std::min(best, detail::directional_limit(homogeneous_part(p, deg), deg, d));
  est.inf_b = best;
  return est;
}

/// Full report; when the axis condition fails every bound is zero.
inline PositivityReport epsilon_bound(const Polynomial& p, const SearchConfig& cfg = {}) {
  PositivityReport r;
  r.leading_coeffs = leading_axis_coeffs(p);
  r.axis_condition = check_axis_condition(p);
  const unsigned deg = p.degree();
  r.index_count = index_count(p.dim(), deg);
  r.tail_bound = *std::min_element(r.leading_coeffs.begin(), r.leading_coeffs.end()) / 3.0;
  if (!r.axis_condition) {
    r.tail_bound = std::max(r.tail_bound, 0.0);
    return r;
  }
  const InfEstimate est = estimate_inf_b(p, cfg);
  r.search_radius = est.radius;
  r.inf_b = std::max(est.inf_b, 0.0);
  r.inf_a_lower = r.inf_b / ((1.0 + r.index_count) * std::pow(1.0 + static_cast<double>(p.dim()), deg));
  r.epsilon = 0.9 * r.inf_a_lower;
  return r;
}

/// Fast sufficient test: w has degree <= 2m and every coefficient (present in either
/// polynomial) differs from p's by less than report.epsilon.
inline bool within_epsilon(const Polynomial& p, const Polynomial& w, const PositivityReport& report) {
  if (!report.axis_condition || !(report.epsilon > 0.0)) return false;
  if (w.degree() > p.degree()) return false;
  return w.max_abs_diff(p) < report.epsilon;
}

}  // namespace pnd
