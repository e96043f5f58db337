#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace laakso {

enum class ErrorCode {
  kInvalidLabel,
  kInvalidRange,
  kWindowMismatch,
  kTooLarge,
  kCapExceeded,
  kNoConvergence,
  kNotAdmissible,
  kTargetOutOfRange,
  kDegenerate,
  kInconclusive,
  kInvalidConfig,
};

const char* to_string(ErrorCode code);

/// Library error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a ball or propagation would exceed the configured vertex cap.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, std::int64_t reached_radius, std::int64_t vertices)
      : Error(ErrorCode::kCapExceeded, what), reached_radius_(reached_radius), vertices_(vertices) {}

  /// Last radius whose sphere was fully materialized.
  std::int64_t reached_radius() const noexcept { return reached_radius_; }
  std::int64_t vertices() const noexcept { return vertices_; }

 private:
  std::int64_t reached_radius_;
  std::int64_t vertices_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidLabel: return "InvalidLabel";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kWindowMismatch: return "WindowMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotAdmissible: return "NotAdmissible";
    case ErrorCode::kTargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kInconclusive: return "Inconclusive";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace laakso
