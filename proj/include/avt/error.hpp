#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace avt {

enum class ErrorCode {
  NonConvergence,
  InvalidBracket,
  NonFinite,
  DomainError,
  InvalidGrid,
  BoundaryViolation,
  InfinitePriorInfo,
  ZeroAugmentation,
  SingularInformation,
  MissingGradient,
  SupportViolation,
  DegenerateInput,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::InfinitePriorInfo: return "InfinitePriorInfo";
    case ErrorCode::ZeroAugmentation: return "ZeroAugmentation";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::MissingGradient: return "MissingGradient";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `code()`
/// identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace avt
