#pragma once

#include <stdexcept>
#include <string>

namespace ast {

/// Raised when a caller passes malformed data (non-finite values, wrong sizes).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is invoked outside its precondition
/// (stepping a terminal simulator, selecting from an empty node, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for values outside a declared domain, e.g. an initial condition
/// outside the scenario support during training.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulator failure, tagged with the step at which it happened.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

/// Configuration file problems (missing keys, unparsable values, bad paths).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ast
