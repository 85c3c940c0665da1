#pragma once

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "polynomial.hpp"

namespace pnd {

/// splitmix64; deterministic across platforms, unlike the std distributions.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; the second variate is discarded to keep the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t state_;
};

struct LocalResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
};

/// Projected, damped Newton iteration inside the box [lo, hi].
///
/// `obj(x, f, grad, hess)` fills f and, when the pointers are non-null, the
/// gradient and Hessian. Coordinates pinned at a bound with the gradient pointing
/// outward are frozen for the step.
template <class Objective>
LocalResult minimize_in_box(const Objective& obj, Vector x, const Vector& lo, const Vector& hi,
                            int max_iter = 200) {
  const Eigen::Index d = x.size();
  x = x.cwiseMax(lo).cwiseMin(hi);
  double f = 0.0;
  Vector g(d);
  Matrix h(d, d);
  obj(x, f, &g, &h);
  double mu = 1e-10 * (1.0 + h.cwiseAbs().maxCoeff());

  LocalResult res;
  int it = 0;
  for (; it < max_iter; ++it) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool pinned_lo = x(i) <= lo(i) && g(i) > 0.0;
      const bool pinned_hi = x(i) >= hi(i) && g(i) < 0.0;
      if (!pinned_lo && !pinned_hi) free.push_back(i);
    }
    if (free.empty()) break;
    const auto nf = static_cast<Eigen::Index>(free.size());
    Vector gf(nf);
    Matrix hf(nf, nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf(a) = g(free[a]);
      for (Eigen::Index b = 0; b < nf; ++b) hf(a, b) = h(free[a], free[b]);
    }
    if (!(gf.norm() > 0.0)) break;

    const double hscale = 1.0 + hf.cwiseAbs().maxCoeff();
    bool accepted = false;
    Vector x_new = x;
    double f_new = f;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::LLT<Matrix> llt(hf + mu * Matrix::Identity(nf, nf));
      if (llt.info() == Eigen::Success) {
        const Vector step = llt.solve(-gf);
        x_new = x;
        for (Eigen::Index a = 0; a < nf; ++a) x_new(free[a]) += step(a);
        x_new = x_new.cwiseMax(lo).cwiseMin(hi);
        obj(x_new, f_new, nullptr, nullptr);
        if (std::isfinite(f_new) && f_new < f) {
          accepted = true;
          break;
        }
      }
      mu = std::max(mu * 10.0, 1e-14 * hscale);
    }
    if (!accepted) break;
    mu = std::max(mu * 0.1, 1e-16 * hscale);
    const double decrease = f - f_new;
    const double moved = (x_new - x).norm();
    x = x_new;
    obj(x, f, &g, &h);
    if (decrease <= 1e-16 * std::abs(f) && moved <= 1e-14 * (1.0 + x.norm())) break;
  }
  res.x = x;
  res.value = f;
  res.iterations = it;
  return res;
}

/// Budget for the expanding-box multi-start search.
struct SearchConfig {
  int doublings = 6;
  double initial_halfwidth = 1.0;
  /// 0 selects 2d + 1 starts per box.
  int starts_per_level = 0;
  std::uint64_t seed = 0;
  int max_iter = 200;
};

struct SearchResult {
  Vector point;
  double value = std::numeric_limits<double>::infinity();
  /// False when the best value still improves as the box grows and sits on the
  /// box boundary: the infimum is approached at infinity.
  bool attained = true;
  std::vector<double> level_minima;
  double halfwidth = 0.0;
};

/// Multi-start local minimization over boxes [-w, w]^d, w doubling each level.
/// Each level restarts from the incumbent plus uniform random points.
template <class Objective>
SearchResult multistart_minimize(const Objective& obj, std::size_t dim, const SearchConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(dim);
  const int starts = cfg.starts_per_level > 0 ? cfg.starts_per_level : static_cast<int>(2 * dim + 1);
  SplitMix64 rng(cfg.seed);
  SearchResult best;
  best.point = Vector::Zero(d);

  for (int level = 0; level <= cfg.doublings; ++level) {
    const double w = cfg.initial_halfwidth * std::ldexp(1.0, level);
    const Vector lo = Vector::Constant(d, -w);
    const Vector hi = Vector::Constant(d, w);
    for (int s = 0; s < starts; ++s) {
      Vector x0(d);
      if (s == 0) {
        x0 = best.point;
      } else {
        for (Eigen::Index j = 0; j < d; ++j) x0(j) = rng.uniform(-w, w);
      }
      const LocalResult r = minimize_in_box(obj, x0, lo, hi, cfg.max_iter);
      if (r.value < best.value) {
        best.value = r.value;
        best.point = r.x;
      }
    }
    best.level_minima.push_back(best.value);
    best.halfwidth = w;
  }

  const auto& m = best.level_minima;
  const bool on_boundary = best.point.cwiseAbs().maxCoeff() >= 0.999 * best.halfwidth;
  bool still_improving = false;
  if (m.size() >= 2) {
    const double gain = m[m.size() - 2] - m.back();
    still_improving = gain > 1e-10 * std::max(1.0, std::abs(m.back()));
  }
  best.attained = !(on_boundary && still_improving);
  return best;
}

/// Objective adaptor for a polynomial.
struct PolynomialObjective {
  PolyEvaluator ev;
  explicit PolynomialObjective(const Polynomial& p) : ev(p) {}
  void operator()(const Vector& x, double& f, Vector* g, Matrix* h) const { ev.evaluate(x, f, g, h); }
};

inline SearchResult minimize_polynomial(const Polynomial& p, const SearchConfig& cfg = {}) {
  return multistart_minimize(PolynomialObjective(p), p.dim(), cfg);
}

}  // namespace pnd
