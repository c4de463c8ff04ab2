#include "degrd/error.hpp"

namespace degrd {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_field: return "InvalidField";
    case ErrorCode::invalid_mass: return "InvalidMass";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_exponent: return "InvalidExponent";
    case ErrorCode::not_positive: return "NotPositive";
    case ErrorCode::lin_solve_failure: return "LinSolveFailure";
    case ErrorCode::numerical_blowup: return "NumericalBlowup";
    case ErrorCode::degenerate_equilibrium: return "DegenerateEquilibrium";
    case ErrorCode::already_converged: return "AlreadyConverged";
    case ErrorCode::non_decaying: return "NonDecaying";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::invalid_sampling: return "InvalidSampling";
    case ErrorCode::missing_diagnostic: return "MissingDiagnostic";
    case ErrorCode::step_too_large: return "StepTooLarge";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace degrd
