#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charfn.hpp"
#include "positivity.hpp"

namespace pnd {

enum class Verdict { HasRealZero, FailsAxisCondition, Eligible };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HasRealZero: return "HasRealZero";
    case Verdict::FailsAxisCondition: return "FailsAxisCondition";
    case Verdict::Eligible: return "Eligible";
  }
  return "?";
}

struct DecomposeOptions {
  SearchConfig search;
  /// Bisection tolerance on theta.
  double theta_tol = 1e-6;
  /// p_theta counts as nonnegative when its search minimum is at least this.
  double admissible_floor = -1e-12;
  /// Normalized polynomial values at or below this count as a zero.
  double zero_tolerance = 1e-9;
};

struct Diagnosis {
  Verdict verdict = Verdict::Eligible;
  /// Best point of the global search on the normalized polynomial; always filled.
  MinPoint minimum;
  /// Set only for HasRealZero.
  std::optional<MinPoint> witness;
  /// Positivity data of the whitened, shifted, normalized polynomial.
  PositivityReport report;
  std::string note;
};

/// A zero of the density polynomial rules out any decomposition; failing the axis
/// condition only means the normal-factor construction does not apply.
inline Diagnosis precheck(const Pnd& f, const DecomposeOptions& opt = {}) {
  Diagnosis dx;
  dx.minimum = find_min_poly(f, opt.search);
  dx.minimum.value *= f.norm_const();
  if (dx.minimum.attained && dx.minimum.value <= opt.zero_tolerance) {
    dx.verdict = Verdict::HasRealZero;
    dx.witness = dx.minimum;
    dx.report.leading_coeffs = leading_axis_coeffs(f.whitened());
    dx.report.axis_condition = check_axis_condition(f.whitened());
    return dx;
  }
  dx.report = epsilon_bound(f.whitened(), opt.search);
  dx.verdict = dx.report.axis_condition ? Verdict::Eligible : Verdict::FailsAxisCondition;
  if (f.poly().degree() == 0) dx.note = "constant polynomial: Gaussian factors for every theta";
  else if (!dx.minimum.attained) dx.note = "infimum approached at infinity, not attained";
  return dx;
}

struct ThetaProbe {
  double theta;
  double min_value;
  bool admissible;
};

struct ThetaSearch {
  double theta_min = 1.0;
  /// Every probe in evaluation order.
  std::vector<ThetaProbe> trace;
};

inline ThetaProbe probe_theta(const HermiteCoeffs& h, double theta, const DecomposeOptions& opt) {
  const SearchResult s = minimize_polynomial(theta_rescale(h, theta), opt.search);
  return {theta, s.value, s.value >= opt.admissible_floor};
}

/// Smallest theta, to within tol, for which theta_rescale(h, theta) is nonnegative.
/// Admissibility is monotone in theta; the search bisects on (tol, 1 - 1e-9).
inline ThetaSearch theta_floor(const HermiteCoeffs& h, const DecomposeOptions& opt = {}) {
  const double tol = opt.theta_tol;
  if (!(tol > 0.0 && tol < 0.5)) throw OutOfRange("theta tolerance must lie in (0, 0.5)");
  ThetaSearch out;
  double hi = 1.0 - 1e-9;
  out.trace.push_back(probe_theta(h, hi, opt));
  if (!out.trace.back().admissible)
    throw NoAdmissibleTheta("no admissible theta: the rescaled polynomial is negative even at theta = 1 - 1e-9 (" +
                            std::to_string(out.trace.back().min_value) + ")");
  double lo = tol;
  out.trace.push_back(probe_theta(h, lo, opt));
  if (out.trace.back().admissible) {
    out.theta_min = lo;
    return out;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    out.trace.push_back(probe_theta(h, mid, opt));
    (out.trace.back().admissible ? hi : lo) = mid;
  }
  out.theta_min = hi;
  return out;
}

struct Decomposition {
  double theta = 0.0;
  /// Set when theta came from the floor search rather than the caller.
  std::optional<double> theta_floor;
  /// Polynomial factor, centered: precision A / theta^2.
  Pnd factor_y;
  /// Normal factor: mean b, covariance (1 - theta^2) A^{-1}.
  Gaussian factor_z;
  double min_p_theta = 0.0;
  /// Max coefficient difference between cf(Y) cf(Z) and cf(X).
  double cf_mismatch = 0.0;
  std::optional<double> conv_error;
  Diagnosis diagnosis;
};

/// Label for theta_floor in reports: the bisection covers the isotropic construction
/// in whitened coordinates only.
inline constexpr const char* kThetaFloorLabel = "minimal isotropic-whitened theta found";

/// X = Y + Z with Z normal. In whitened coordinates u = L^{-1}(x - b) the polynomial
/// factor has density proportional to p_theta(u) exp(-|u|^2 / (2 theta^2)); it is
/// transported back through L, and the shift b goes to Z.
inline Decomposition decompose(const Pnd& f, std::optional<double> theta = std::nullopt,
                               const DecomposeOptions& opt = {}) {
  Diagnosis dx = precheck(f, opt);
  if (dx.verdict != Verdict::Eligible)
    throw NotEligible(std::string("decomposition not available: ") + to_string(dx.verdict));

  const HermiteCoeffs& h = f.hermite();
  Decomposition out{0.0, std::nullopt, f, Gaussian{}, 0.0, 0.0, std::nullopt, std::move(dx)};
  if (theta) {
    if (!(*theta > 0.0 && *theta < 1.0)) throw OutOfRange("theta must lie in (0, 1)");
    const ThetaProbe pr = probe_theta(h, *theta, opt);
    if (!pr.admissible) throw ThetaInadmissible(*theta, pr.min_value);
    out.theta = *theta;
    out.min_p_theta = pr.min_value;
  } else {
    const ThetaSearch ts = theta_floor(h, opt);
    out.theta_floor = ts.theta_min;
    const double candidate = std::min(ts.theta_min + opt.theta_tol, 1.0 - 1e-9);
    ThetaProbe pr = probe_theta(h, candidate, opt);
    if (!pr.admissible) {
      for (const auto& t : ts.trace)
        if (t.theta == ts.theta_min) pr = t;
    }
    out.theta = pr.theta;
    out.min_p_theta = pr.min_value;
  }

  const double th = out.theta;
  const std::size_t d = f.dim();
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix& l_inv = f.form().whitener_inverse();
  const Polynomial p_theta = theta_rescale(h, th);
  PndOptions no_scan;
  no_scan.check_nonnegative = false;
  out.factor_y = make_pnd(affine_substitute(p_theta, l_inv, Vector::Zero(n)), f.form().matrix() / (th * th),
                          Vector::Zero(n), no_scan);
  out.factor_z = Gaussian{f.shift(), (1.0 - th * th) * f.form().inverse()};
  out.cf_mismatch = max_abs_diff(cf_multiply(forward_cf(out.factor_y), gaussian_cf(out.factor_z)), forward_cf(f));
  return out;
}

}  // namespace pnd
