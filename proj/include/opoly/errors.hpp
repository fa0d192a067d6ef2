#pragma once

#include <stdexcept>
#include <string>

namespace opoly {

/// Parameter outside its admissible domain (gamma <= -1, alpha <= -1/2, k < 1, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input has the wrong shape for the requested operation: a chain that is not
/// sieved, a degree that does not match a mass pattern's schedule, a schedule
/// that is too short, a support point no pattern group claims.
class StructureError : public std::logic_error {
 public:
  explicit StructureError(const std::string& what) : std::logic_error(what) {}
};

/// Numerical failure: pole proximity, branch ambiguity, non-convergence.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace opoly
