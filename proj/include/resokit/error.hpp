#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resokit {

enum class ErrorCode {
  invalid_input,
  pole_at_resonance,
  degenerate_resonance,
  divergent_amplitude,
  kind_mismatch,
  singular_system,
  pole_hit,
  inconsistent_expansion,
  no_bound_state,
  quadrature_failure,
  parameter_mismatch,
  parse_error,
  unit_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::pole_at_resonance: return "PoleAtResonance";
    case ErrorCode::degenerate_resonance: return "DegenerateResonance";
    case ErrorCode::divergent_amplitude: return "DivergentAmplitude";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::pole_hit: return "PoleHit";
    case ErrorCode::inconsistent_expansion: return "InconsistentExpansion";
    case ErrorCode::no_bound_state: return "NoBoundState";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::parameter_mismatch: return "ParameterMismatch";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unit_error: return "UnitError";
  }
  return "Unknown";
}

/// True for errors caused by bad user input rather than a numerical breakdown.
constexpr bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input:
    case ErrorCode::pole_at_resonance:
    case ErrorCode::degenerate_resonance:
    case ErrorCode::kind_mismatch:
    case ErrorCode::singular_system:
    case ErrorCode::parameter_mismatch:
    case ErrorCode::parse_error:
    case ErrorCode::unit_error:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resokit
