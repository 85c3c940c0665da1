// pndtool: validate, transform, diagnose and decompose polynomial-normal densities.
//
// Exit codes: 0 ok, 1 parse or usage error, 2 invalid density or parameters,
// 3 the polynomial has a real zero, 4 the axis condition fails, 5 any other failure.

#include <CLI11.hpp>

#include <pnd/pnd.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using pnd::io::json;

enum Exit : int { kOk = 0, kParse = 1, kInvalid = 2, kRealZero = 3, kAxisCondition = 4, kOther = 5 };

struct RunConfig {
  double theta_tol = 1e-6;
  double negativity_tol = 1e-9;
  int quadrature_order = 0;  // 0: combined degree + 20
  std::uint64_t seed = 0;
  std::string output;
  int verbosity = 0;

  pnd::SearchConfig search() const {
    pnd::SearchConfig s;
    s.seed = seed;
    return s;
  }
  pnd::PndOptions pnd_options() const {
    pnd::PndOptions o;
    o.search = search();
    o.negativity_tolerance = negativity_tol;
    return o;
  }
  pnd::DecomposeOptions decompose_options() const {
    pnd::DecomposeOptions o;
    o.search = search();
    o.theta_tol = theta_tol;
    return o;
  }
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pnd::io::ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw pnd::io::ParseError(path + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw pnd::io::ParseError("cannot write " + cfg.output);
  out << text;
}

json error_doc(const char* kind, const std::string& message) { return {{"error", kind}, {"message", message}}; }

/// Reports err both as JSON on the output and as a line on stderr, then returns code.
int fail(const RunConfig& cfg, int code, const char* kind, const std::string& message, json extra = json::object()) {
  json doc = error_doc(kind, message);
  doc.update(extra);
  std::cerr << "pndtool: " << kind << ": " << message << "\n";
  try {
    emit(cfg, doc);
  } catch (const std::exception&) {
  }
  return code;
}

/// Maps library errors onto exit codes.
template <class F>
int guarded(const RunConfig& cfg, F&& body) {
  try {
    return body();
  } catch (const pnd::io::ParseError& e) {
    return fail(cfg, kParse, "ParseError", e.what());
  } catch (const pnd::DimensionMismatch& e) {
    return fail(cfg, kParse, "DimensionMismatch", e.what());
  } catch (const pnd::NegativeDensity& e) {
    return fail(cfg, kInvalid, "NegativeDensity", e.what(), {{"point", e.point()}, {"value", e.value()}});
  } catch (const pnd::ZeroIntegral& e) {
    return fail(cfg, kInvalid, "ZeroIntegral", e.what());
  } catch (const pnd::NotPositiveDefinite& e) {
    return fail(cfg, kInvalid, "NotPositiveDefinite", e.what());
  } catch (const pnd::NotSymmetric& e) {
    return fail(cfg, kInvalid, "NotSymmetric", e.what());
  } catch (const pnd::DegreeError& e) {
    return fail(cfg, kInvalid, "DegreeError", e.what());
  } catch (const pnd::ConstraintViolation& e) {
    return fail(cfg, kInvalid, "ConstraintViolation", e.what(), {{"constraint", e.constraint()}});
  } catch (const pnd::ThetaInadmissible& e) {
    return fail(cfg, kOther, "ThetaInadmissible", e.what(), {{"theta", e.theta()}, {"min_value", e.min_value()}});
  } catch (const pnd::NoAdmissibleTheta& e) {
    return fail(cfg, kOther, "NoAdmissibleTheta", e.what());
  } catch (const pnd::NoWitnessFound& e) {
    return fail(cfg, kOther, "NoWitnessFound", e.what(), {{"n_max", e.n_max()}});
  } catch (const pnd::QuadratureOrderTooLow& e) {
    return fail(cfg, kOther, "QuadratureOrderTooLow", e.what());
  } catch (const pnd::Error& e) {
    return fail(cfg, kOther, "Error", e.what());
  }
}

int verdict_code(pnd::Verdict v) {
  switch (v) {
    case pnd::Verdict::HasRealZero: return kRealZero;
    case pnd::Verdict::FailsAxisCondition: return kAxisCondition;
    case pnd::Verdict::Eligible: return kOk;
  }
  return kOther;
}

const char* kAxisExplanation =
    "some coefficient of x_j^{2m} is not positive, so the normal-factor construction does not apply; "
    "absence of real zeros alone does not make a normal factor available "
    "(run `pndtool example4` for a density of this kind whose natural normal split fails)";

void print_table(const pnd::Diagnosis& dx) {
  std::ostringstream t;
  t << std::setprecision(6);
  t << "verdict          " << pnd::to_string(dx.verdict) << "\n";
  t << "minimum          " << dx.minimum.value << (dx.minimum.attained ? " (attained)" : " (not attained)") << "\n";
  t << "axis condition   " << (dx.report.axis_condition ? "holds" : "fails") << "\n";
  t << "leading coeffs  ";
  for (double c : dx.report.leading_coeffs) t << " " << c;
  t << "\n";
  // Bounds are computed only past the zero search.
  if (dx.verdict == pnd::Verdict::Eligible) {
    t << "inf_b            " << dx.report.inf_b << "\n";
    t << "inf_a_lower      " << dx.report.inf_a_lower << "\n";
    t << "epsilon          " << dx.report.epsilon << "\n";
    t << "search radius    " << dx.report.search_radius << "\n";
  }
  if (!dx.note.empty()) t << "note             " << dx.note << "\n";
  std::cerr << t.str();
}

std::vector<pnd::Vector> check_grid(std::size_t d) {
  return pnd::uniform_grid(d, -4.0, 4.0, d <= 2 ? 5 : 3);
}

int cmd_validate(const RunConfig& cfg, const std::string& input) {
  const pnd::Pnd f = pnd::io::pnd_from_json(read_json(input), cfg.pnd_options());
  const pnd::MinPoint m = pnd::find_min_poly(f, cfg.search());
  emit(cfg, {{"valid", true},
             {"norm_const", f.norm_const()},
             {"integral", pnd::box_integral(f)},
             {"min_poly_value", m.value * f.norm_const()},
             {"min_point", pnd::io::to_json(m.point)},
             {"min_attained", m.attained}});
  return kOk;
}

int cmd_charfn(const RunConfig& cfg, const std::string& input) {
  emit(cfg, pnd::io::to_json(pnd::forward_cf(pnd::io::pnd_from_json(read_json(input), cfg.pnd_options()))));
  return kOk;
}

int cmd_invcharfn(const RunConfig& cfg, const std::string& input) {
  emit(cfg, pnd::io::to_json(pnd::inverse_cf(pnd::io::charfn_from_json(read_json(input)), cfg.pnd_options())));
  return kOk;
}

int cmd_diagnose(const RunConfig& cfg, const std::string& input) {
  const pnd::Pnd f = pnd::io::pnd_from_json(read_json(input), cfg.pnd_options());
  const pnd::Diagnosis dx = pnd::precheck(f, cfg.decompose_options());
  print_table(dx);
  json doc = pnd::io::to_json(dx);
  if (dx.verdict == pnd::Verdict::FailsAxisCondition) doc["explanation"] = kAxisExplanation;
  emit(cfg, doc);
  return verdict_code(dx.verdict);
}

int cmd_decompose(const RunConfig& cfg, const std::string& input, std::optional<double> theta) {
  const pnd::Pnd f = pnd::io::pnd_from_json(read_json(input), cfg.pnd_options());
  const pnd::DecomposeOptions opt = cfg.decompose_options();
  const pnd::Diagnosis dx = pnd::precheck(f, opt);
  if (dx.verdict != pnd::Verdict::Eligible) {
    print_table(dx);
    json doc = pnd::io::to_json(dx);
    if (dx.verdict == pnd::Verdict::FailsAxisCondition) doc["explanation"] = kAxisExplanation;
    emit(cfg, {{"diagnosis", doc}, {"error", "NotEligible"}});
    return verdict_code(dx.verdict);
  }
  pnd::Decomposition dc = pnd::decompose(f, theta, opt);
  const pnd::ConvReport r =
      pnd::convolution_check(f, dc.factor_y, pnd::to_pnd(dc.factor_z), check_grid(f.dim()), cfg.quadrature_order);
  dc.conv_error = r.max_abs_error;
  if (cfg.verbosity > 0)
    std::cerr << "theta " << dc.theta << ", cf mismatch " << dc.cf_mismatch << ", conv error " << r.max_abs_error
              << "\n";
  emit(cfg, pnd::io::to_json(dc));
  return kOk;
}

int cmd_verify_conv(const RunConfig& cfg, const std::string& fp, const std::string& yp, const std::string& zp,
                    int grid_n, double lo, double hi, double max_error) {
  pnd::PndOptions opt = cfg.pnd_options();
  const pnd::Pnd f = pnd::io::factor_from_json(read_json(fp), opt);
  const pnd::Pnd y = pnd::io::factor_from_json(read_json(yp), opt);
  const pnd::Pnd z = pnd::io::factor_from_json(read_json(zp), opt);
  const pnd::ConvReport r =
      pnd::convolution_check(f, y, z, pnd::uniform_grid(f.dim(), lo, hi, grid_n), cfg.quadrature_order);
  json doc = pnd::io::to_json(r);
  doc["threshold"] = max_error;
  doc["passed"] = r.max_abs_error <= max_error;
  emit(cfg, doc);
  return r.max_abs_error <= max_error ? kOk : kOther;
}

int cmd_example4(const RunConfig& cfg, const pnd::counterexample::Params& p, int n_max, const std::string& csv) {
  namespace ce = pnd::counterexample;
  p.validate();
  json coef = json::object();
  if (p.a12 != 0.0) coef["printed"] = ce::printed_curve_coefficient(p);
  if (p.a12 > 0.0) {
    const double extracted = ce::extracted_curve_coefficient(p);
    coef["derived"] = ce::derived_curve_coefficient(p);
    coef["extracted"] = extracted;
    coef["printed_minus_extracted"] = coef["printed"].get<double>() - extracted;
  }
  const ce::Witness w = ce::negative_witness(p, n_max);
  json doc{{"params", {{"a11", p.a11}, {"a12", p.a12}, {"a22", p.a22}}},
           {"curve_coefficient", coef},
           {"branch", p.a12 == 0.0 ? "x1-axis" : "curve"},
           {"witness", pnd::io::to_json(w)},
           {"candidate_density", pnd::io::to_json(ce::candidate_density(p).poly)},
           {"n_max", n_max}};
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw pnd::io::ParseError("cannot write " + csv);
    out << "x1,x2,f\n" << std::setprecision(17);
    for (const auto& row : ce::curve_slice(p, n_max)) out << row[0] << "," << row[1] << "," << row[2] << "\n";
    doc["csv"] = csv;
  }
  emit(cfg, doc);
  return kOk;
}

int cmd_probe(const RunConfig& cfg, const std::string& poly_path, int starts) {
  const pnd::Polynomial p = pnd::io::polynomial_from_json(read_json(poly_path));
  const pnd::ProbeResult r = pnd::biquadratic_factor_probe(p, starts, cfg.seed);
  json doc = pnd::io::to_json(r);
  doc["factored"] = r.residual <= 1e-8;
  doc["note"] = r.residual <= 1e-8 ? "product of two quadratics found"
                                   : "no factorization found over the starts tried; evidence, not proof";
  emit(cfg, doc);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-normal densities: validation, transforms, diagnosis and normal-factor decomposition"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--tol", cfg.theta_tol, "theta bisection tolerance")->check(CLI::PositiveNumber);
  app.add_option("--neg-tol", cfg.negativity_tol, "negativity tolerance of the density scan")
      ->check(CLI::PositiveNumber);
  app.add_option("--quadrature-order", cfg.quadrature_order, "Gauss-Hermite order (0 = degree + 20)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "seed of every randomized search");
  app.add_option("-o,--out,--output", cfg.output, "output file (default stdout)");
  app.add_flag("-v,--verbose", cfg.verbosity, "progress notes on stderr");

  std::string input;
  auto* validate = app.add_subcommand("validate", "build the density and report its normalization");
  validate->add_option("input,-i,--input", input, "PND JSON")->required();
  auto* charfn = app.add_subcommand("charfn", "characteristic function of a PND");
  charfn->add_option("input,-i,--input", input, "PND JSON")->required();
  auto* invcharfn = app.add_subcommand("invcharfn", "density of a characteristic function");
  invcharfn->add_option("input,-i,--input", input, "CharFn JSON")->required();
  auto* diagnose = app.add_subcommand("diagnose", "zero search and positivity report");
  diagnose->add_option("input,-i,--input", input, "PND JSON")->required();

  std::optional<double> theta;
  auto* decompose = app.add_subcommand("decompose", "split off a normal factor");
  decompose->add_option("input,-i,--input", input, "PND JSON")->required();
  decompose->add_option("--theta", theta, "theta in (0, 1); default: just above the smallest admissible one");

  std::string f_path, y_path, z_path;
  int grid_n = 5;
  double lo = -4.0, hi = 4.0, max_error = 1e-5;
  auto* conv = app.add_subcommand("verify-conv", "check f = y * z numerically on a grid");
  conv->add_option("--f", f_path, "target PND JSON")->required();
  conv->add_option("--y", y_path, "first factor, PND or Gaussian JSON")->required();
  conv->add_option("--z", z_path, "second factor, PND or Gaussian JSON")->required();
  conv->add_option("--grid-n", grid_n, "points per axis")->check(CLI::PositiveNumber);
  conv->add_option("--lo", lo, "grid lower end");
  conv->add_option("--hi", hi, "grid upper end");
  conv->add_option("--max-error", max_error, "pass threshold")->check(CLI::PositiveNumber);

  pnd::counterexample::Params params;
  int n_max = 50;
  std::string csv;
  auto* ex4 = app.add_subcommand("example4", "candidate normal split that is not a characteristic function");
  ex4->add_option("--a11", params.a11);
  ex4->add_option("--a12", params.a12);
  ex4->add_option("--a22", params.a22);
  ex4->add_option("--n-max", n_max, "last curve index scanned")->check(CLI::NonNegativeNumber);
  ex4->add_option("--csv", csv, "write the density slice along the curve");

  std::string poly_path;
  int starts = 200;
  auto* probe = app.add_subcommand("probe", "search for a product of two quadratics");
  probe->add_option("--poly,input", poly_path, "Polynomial JSON")->required();
  probe->add_option("--starts", starts, "multistart count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  return guarded(cfg, [&] {
    if (*validate) return cmd_validate(cfg, input);
    if (*charfn) return cmd_charfn(cfg, input);
    if (*invcharfn) return cmd_invcharfn(cfg, input);
    if (*diagnose) return cmd_diagnose(cfg, input);
    if (*decompose) return cmd_decompose(cfg, input, theta);
    if (*conv) return cmd_verify_conv(cfg, f_path, y_path, z_path, grid_n, lo, hi, max_error);
    if (*ex4) return cmd_example4(cfg, params, n_max, csv);
    return cmd_probe(cfg, poly_path, starts);
  });
}
