#pragma once

#include <stdexcept>
#include <string>

namespace pe {

// Process exit codes shared by the CLI and the error types below.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitNotConverged = 3,
};

/// Bad input: out-of-range parameter, malformed config, precondition violated.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well formed but a closed-form evaluation would overflow.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failure while time stepping. Carries the index of the step that failed.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Malformed or unsupported binary snapshot.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pe
