#pragma once

#include <stdexcept>
#include <string>

namespace degrd {

enum class ErrorCode {
  invalid_field,
  invalid_mass,
  invalid_argument,
  invalid_exponent,
  not_positive,
  lin_solve_failure,
  numerical_blowup,
  degenerate_equilibrium,
  already_converged,
  non_decaying,
  unsupported,
  invalid_sampling,
  missing_diagnostic,
  step_too_large,
  config_error,
  io_error,
  parse_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type for every recoverable failure in the library. The code
/// identifies the failure class; what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace degrd
