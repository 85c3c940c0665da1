#pragma once

// JSON forms of the library types. Keys follow nlohmann's sorted order on output,
// so identical values always serialize to identical bytes.

#include <json.hpp>

#include <string>
#include <vector>

#include "decompose.hpp"
#include "verify.hpp"

namespace pnd::io {

using json = nlohmann::json;

/// Malformed or incomplete input document.
class ParseError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace detail

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// Row-major nested arrays.
inline json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = detail::number(j[i], what);
  return v;
}

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + " must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError(std::string(what) + " has ragged rows");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = detail::number(j[i][k], what);
  }
  return m;
}

template <class Basis>
json to_json(const SparseSeries<Basis>& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha}, {"coef", c}});
  return {{"dim", p.dim()}, {"terms", std::move(terms)}};
}

/// {"dim": d, "terms": [{"alpha": [...], "coef": c}, ...]}; repeated indices add up.
inline Polynomial polynomial_from_json(const json& j) {
  const json& dj = detail::field(j, "dim");
  if (!dj.is_number_unsigned() || dj.get<std::size_t>() == 0) throw ParseError("\"dim\" must be a positive integer");
  const std::size_t d = dj.get<std::size_t>();
  const json& terms = detail::field(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
  Polynomial p(d);
  for (const json& t : terms) {
    const json& aj = detail::field(t, "alpha");
    if (!aj.is_array() || aj.size() != d) throw ParseError("each \"alpha\" must hold dim entries");
    MultiIndex alpha;
    for (const json& k : aj) {
      if (!k.is_number_unsigned()) throw ParseError("multi-index entries must be non-negative integers");
      alpha.push_back(k.get<unsigned>());
    }
    p.add_term(alpha, detail::number(detail::field(t, "coef"), "\"coef\""));
  }
  return p;
}

/// Raw fields of a PND document before validation.
struct PndInput {
  Polynomial poly{1};
  Matrix a;
  Vector b;
};

/// {"poly": <Polynomial>, "A": [[...]], "b": [...]}; "b" defaults to zero and any
/// "norm_const" present is ignored (it is recomputed).
inline PndInput pnd_input_from_json(const json& j) {
  PndInput in;
  in.poly = polynomial_from_json(detail::field(j, "poly"));
  in.a = matrix_from_json(detail::field(j, "A"), "\"A\"");
  in.b = j.contains("b") ? vector_from_json(j["b"], "\"b\"") : Vector::Zero(static_cast<Eigen::Index>(in.poly.dim()));
  return in;
}

inline Pnd pnd_from_json(const json& j, const PndOptions& opt = {}) {
  const PndInput in = pnd_input_from_json(j);
  return make_pnd(in.poly, in.a, in.b, opt);
}

inline json to_json(const Pnd& f) {
  return {{"poly", to_json(f.poly())}, {"A", to_json(f.form().matrix())}, {"b", to_json(f.shift())},
          {"norm_const", f.norm_const()}};
}

inline json to_json(const Gaussian& g) { return {{"mean", to_json(g.mean)}, {"cov", to_json(g.cov)}}; }

inline Gaussian gaussian_from_json(const json& j) {
  return {vector_from_json(detail::field(j, "mean"), "\"mean\""), matrix_from_json(detail::field(j, "cov"), "\"cov\"")};
}

/// A factor document is either a Gaussian ("mean", "cov") or a PND.
inline Pnd factor_from_json(const json& j, const PndOptions& opt = {}) {
  if (j.is_object() && j.contains("mean")) return to_pnd(gaussian_from_json(j));
  return pnd_from_json(j, opt);
}

/// CharFn document plus the expanded real and imaginary polynomials in t.
inline json to_json(const CharFn& cf) {
  const ExpandedPoly e = expanded_parts(cf);
  json beta = json::array();
  for (const auto& [alpha, c] : cf.beta().terms()) beta.push_back({{"alpha", alpha}, {"coef", c}});
  return {{"dim", cf.dim()},
          {"beta", std::move(beta)},
          {"Sigma", to_json(cf.sigma())},
          {"b", to_json(cf.shift())},
          {"renormalized", cf.renormalized()},
          {"expanded", {{"real", to_json(e.real)}, {"imag", to_json(e.imag)}}}};
}

inline CharFn charfn_from_json(const json& j) {
  const json& dj = detail::field(j, "dim");
  if (!dj.is_number_unsigned()) throw ParseError("\"dim\" must be a positive integer");
  const Polynomial beta = polynomial_from_json({{"dim", dj}, {"terms", detail::field(j, "beta")}});
  const Matrix sigma = matrix_from_json(detail::field(j, "Sigma"), "\"Sigma\"");
  const Vector b = j.contains("b") ? vector_from_json(j["b"], "\"b\"") : Vector::Zero(static_cast<Eigen::Index>(beta.dim()));
  return make_charfn(beta, sigma, b);
}

inline json to_json(const MinPoint& m) {
  return {{"point", to_json(m.point)}, {"value", m.value}, {"attained", m.attained}};
}

inline json to_json(const PositivityReport& r) {
  return {{"axis_condition", r.axis_condition}, {"leading_coeffs", r.leading_coeffs}, {"inf_b", r.inf_b},
          {"inf_a_lower", r.inf_a_lower},       {"epsilon", r.epsilon},               {"search_radius", r.search_radius},
          {"index_count", r.index_count},       {"tail_bound", r.tail_bound}};
}

inline json to_json(const Diagnosis& dx) {
  json out{{"verdict", to_string(dx.verdict)}, {"minimum", to_json(dx.minimum)}, {"report", to_json(dx.report)},
           {"note", dx.note}};
  out["witness"] = dx.witness ? to_json(*dx.witness) : json(nullptr);
  return out;
}

inline json to_json(const Decomposition& dc) {
  json out{{"theta", dc.theta},
           {"factor_Y", to_json(dc.factor_y)},
           {"factor_Z", to_json(dc.factor_z)},
           {"min_p_theta", dc.min_p_theta},
           {"cf_mismatch", dc.cf_mismatch},
           {"diagnosis", to_json(dc.diagnosis)}};
  out["theta_floor"] = dc.theta_floor ? json{{"value", *dc.theta_floor}, {"label", kThetaFloorLabel}} : json(nullptr);
  out["conv_error"] = dc.conv_error ? json(*dc.conv_error) : json(nullptr);
  return out;
}

inline json to_json(const ConvReport& r) {
  json grid = json::array();
  for (const Vector& x : r.grid) grid.push_back(to_json(x));
  return {{"grid", std::move(grid)},
          {"errors", r.errors},
          {"max_abs_error", r.max_abs_error},
          {"quadrature_order", r.quadrature_order}};
}

inline json to_json(const counterexample::Witness& w) {
  return {{"point", to_json(w.point)}, {"poly_value", w.poly_value}, {"density_value", w.density_value}, {"n", w.n}};
}

inline json to_json(const ProbeResult& r) {
  return {{"residual", r.residual}, {"factor1", to_json(r.factor1)}, {"factor2", to_json(r.factor2)},
          {"starts", r.starts}};
}

}  // namespace pnd::io
