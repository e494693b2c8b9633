#pragma once

#include <stdexcept>
#include <string>

namespace ddestab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |D| came too close to zero on the root-counting contour; the left edge
/// sigma must be perturbed before the winding number can be trusted.
class ContourTooClose : public std::runtime_error {
 public:
  ContourTooClose(const std::string& what, double min_abs)
      : std::runtime_error(what), min_abs_(min_abs) {}
  double min_abs() const noexcept { return min_abs_; }

 private:
  double min_abs_;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 - alpha cos(omega tau_alpha) vanished; curve formulas are undefined there.
class Singular : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ddestab
