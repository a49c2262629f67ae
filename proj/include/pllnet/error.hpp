#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pllnet {

enum class ErrorCode {
  NoEquilibrium,
  DimensionMismatch,
  UnsupportedKind,
  IndexOutOfRange,
  DegenerateS,
  DegenerateCrossing,
  BranchDomain,
  NoConvergence,
  BoundaryRoot,
  StepTooLarge,
  NonFinite,
  NotPeriodic,
  InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoEquilibrium: return "NoEquilibrium";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateS: return "DegenerateS";
    case ErrorCode::DegenerateCrossing: return "DegenerateCrossing";
    case ErrorCode::BranchDomain: return "BranchDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BoundaryRoot: return "BoundaryRoot";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// \brief Domain error raised by every pllnet routine.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pllnet
