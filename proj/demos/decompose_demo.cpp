// Splits a normal factor off a two-dimensional polynomial-normal density and
// prints the pieces, then a slice of f next to the convolution of its factors.
//
//   decompose_demo [slice.csv]

#include <pnd/pnd.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  using namespace pnd;
  // (x1 x2 - 1)^2 + x2^2 + 0.1 (x1^4 + x2^4) under a correlated Gaussian.
  Polynomial p = counterexample::valley();
  p.add_term({4, 0}, 0.1);
  p.add_term({0, 4}, 0.1);
  Matrix a(2, 2);
  a << 1.0, 0.3, 0.3, 0.8;
  Vector b(2);
  b << 0.5, -0.25;
  const Pnd f = make_pnd(p, a, b);

  const Diagnosis dx = precheck(f);
  std::printf("verdict %s, epsilon %.3g\n", to_string(dx.verdict), dx.report.epsilon);
  if (dx.verdict != Verdict::Eligible) return 1;

  const Decomposition dc = decompose(f);
  std::printf("theta %.6f (floor %.6f), cf mismatch %.2g\n", dc.theta, *dc.theta_floor, dc.cf_mismatch);
  std::cout << "Z mean " << dc.factor_z.mean.transpose() << "\nZ cov\n" << dc.factor_z.cov << "\n";
  std::cout << "Y precision\n" << dc.factor_y.form().matrix() << "\n";

  const Pnd z = to_pnd(dc.factor_z);
  const QuadratureRule rule = gauss_hermite(static_cast<int>(p.degree()) + 20);
  std::ofstream csv(argc > 1 ? argv[1] : "slice.csv");
  csv << "x1,x2,f,conv\n";
  double worst = 0.0;
  for (int k = -40; k <= 40; ++k) {
    Vector x(2);
    x << 0.1 * k, 0.3;
    const double fx = density(f, x);
    const double cx = convolution_at(dc.factor_y, z, x, rule);
    worst = std::max(worst, std::abs(fx - cx));
    csv << x(0) << "," << x(1) << "," << fx << "," << cx << "\n";
  }
  std::printf("slice along x2 = 0.3: max |f - Y*Z| = %.2g\n", worst);
  return 0;
}
