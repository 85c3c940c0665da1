#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pnd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class DegreeError : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class NotSymmetric : public Error {
public:
  explicit NotSymmetric(double asymmetry)
      : Error("matrix is not symmetric (max asymmetry " + std::to_string(asymmetry) + ")"),
        asymmetry_(asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

private:
  double asymmetry_;
};

class NotPositiveDefinite : public Error {
public:
  NotPositiveDefinite(std::size_t pivot_index, double pivot)
      : Error("matrix is not positive definite (Cholesky pivot " + std::to_string(pivot_index) +
              " = " + std::to_string(pivot) + ")"),
        pivot_index_(pivot_index), pivot_(pivot) {}
  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_index_;
  double pivot_;
};

/// The density polynomial takes a strictly negative value at `point`.
class NegativeDensity : public Error {
public:
  NegativeDensity(std::vector<double> point, double value)
      : Error(describe(point, value)), point_(std::move(point)), value_(value) {}
  const std::vector<double>& point() const noexcept { return point_; }
  double value() const noexcept { return value_; }

private:
  static std::string describe(const std::vector<double>& p, double v) {
    std::string s = "polynomial is negative (" + std::to_string(v) + ") at (";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(p[i]);
    }
    return s + ")";
  }
  std::vector<double> point_;
  double value_;
};

class ZeroIntegral : public Error {
public:
  explicit ZeroIntegral(double beta0)
      : Error("constant Hermite coefficient is not positive (" + std::to_string(beta0) + ")"),
        beta0_(beta0) {}
  double beta0() const noexcept { return beta0_; }

private:
  double beta0_;
};

class ConditionFailed : public Error {
public:
  using Error::Error;
};

class NotEligible : public Error {
public:
  using Error::Error;
};

class ThetaInadmissible : public Error {
public:
  ThetaInadmissible(double theta, double min_value)
      : Error("theta " + std::to_string(theta) + " is not admissible: rescaled polynomial reaches " +
              std::to_string(min_value)),
        theta_(theta), min_value_(min_value) {}
  double theta() const noexcept { return theta_; }
  double min_value() const noexcept { return min_value_; }

private:
  double theta_;
  double min_value_;
};

class NoAdmissibleTheta : public Error {
public:
  using Error::Error;
};

/// A parameter triple violates one of the named inequalities.
class ConstraintViolation : public Error {
public:
  explicit ConstraintViolation(std::string constraint)
      : Error("constraint violated: " + constraint), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

private:
  std::string constraint_;
};

class NoWitnessFound : public Error {
public:
  explicit NoWitnessFound(int n_max)
      : Error("no negative point found for n <= " + std::to_string(n_max)), n_max_(n_max) {}
  int n_max() const noexcept { return n_max_; }

private:
  int n_max_;
};

class QuadratureOrderTooLow : public Error {
public:
  QuadratureOrderTooLow(int order, int degree)
      : Error("quadrature order " + std::to_string(order) + " does not exceed combined degree " +
              std::to_string(degree)) {}
};

}  // namespace pnd
