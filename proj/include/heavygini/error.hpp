#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hg {

// Base of every library error. Subclasses split into two groups: invalid
// input (DomainError and friends) and numerical failure (ConvergenceError,
// QuadratureError). The CLI maps the first group to exit code 2 and the
// second to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters outside the moment regime a formula needs (e.g. delta <= 1 for
// a finite mean).
class MomentError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// The family has no linear regression of X on Y.
class NoLinearRegressionError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_sum, double last_term,
                   std::size_t terms)
      : Error(what), partial_sum_(partial_sum), last_term_(last_term), terms_(terms) {}

  double partial_sum() const noexcept { return partial_sum_; }
  double last_term() const noexcept { return last_term_; }
  std::size_t terms() const noexcept { return terms_; }

 private:
  double partial_sum_;
  double last_term_;
  std::size_t terms_;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

inline bool is_numerical_failure(const Error& e) noexcept {
  return dynamic_cast<const ConvergenceError*>(&e) != nullptr ||
         dynamic_cast<const QuadratureError*>(&e) != nullptr;
}

}  // namespace hg
