#pragma once

#include <stdexcept>
#include <string>

namespace pixvem {

enum class ErrorCode {
  EmptyDomain,
  ParseError,
  HoleInDomain,
  ZeroGradient,
  NoIntersection,
  DegenerateMesh,
  SingularG,
  NonFiniteEntry,
  SingularMatrix,
  SingularReducedSystem,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers (notably the
/// CLI exit-code mapping) which failure class occurred.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for input/configuration problems as opposed to numerical failures.
  bool is_input_error() const noexcept {
    return code_ == ErrorCode::ConfigError || code_ == ErrorCode::ParseError ||
           code_ == ErrorCode::EmptyDomain || code_ == ErrorCode::HoleInDomain;
  }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HoleInDomain: return "HoleInDomain";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::DegenerateMesh: return "DegenerateMesh";
    case ErrorCode::SingularG: return "SingularG";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularReducedSystem: return "SingularReducedSystem";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace pixvem
