#pragma once

#include <stdexcept>
#include <string>

namespace navguard {

enum class ErrorCode {
  DimensionMismatch,
  NotPsd,
  NoConvergence,
  NotDetectable,
  NonFiniteState,
  EmptyRoute,
  SingularInnovation,
  InsufficientData,
  WindowTooShort,
  NotCalibrated,
  ConfigInvalid,
  IoError,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotDetectable: return "NotDetectable";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::EmptyRoute: return "EmptyRoute";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::NotCalibrated: return "NotCalibrated";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

// All library failures surface as Error; code() selects the category and
// what() carries the offending field or matrix name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace navguard
