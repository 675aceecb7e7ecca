#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridtomo {

enum class ErrorCode {
  ZeroVector,
  NoStructure,
  BadN,
  NotUniquenessSet,
  OutOfRegion,
  DimensionMismatch,
  NonFinite,
  NegativeRadicand,
  InconsistentIndex,
  IllConditioned,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NoStructure: return "NoStructure";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::NotUniquenessSet: return "NotUniquenessSet";
    case ErrorCode::OutOfRegion: return "OutOfRegion";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::InconsistentIndex: return "InconsistentIndex";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace gridtomo
