#pragma once

#include <stdexcept>
#include <string>

namespace semibound {

// Precondition on an argument failed (γ out of range, |z| >= 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical hypothesis of a bound does not hold for the given data.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative method hit its cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const { return best_; }
  double error_estimate() const { return err_; }

 private:
  double best_;
  double err_;
};

}  // namespace semibound
