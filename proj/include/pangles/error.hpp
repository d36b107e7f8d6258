#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pangles {

enum class ErrorCode {
  NonSquare,
  NotSymmetric,
  NotFinite,
  NotSPD,
  ZeroSpan,
  DimensionMismatch,
  TrivialSubspace,
  AllAnglesZero,
  EmptySet,
  DegenerateAngle,
  EmptySelection,
  RangeIncludesRightAngle,
  ZeroVector,
  NotInvariant,
  NotExtremalCluster,
  StartNotInF,
  EmptySpectrum,
  BadOverlap,
  NodesMissing,
  Parse,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::ZeroSpan: return "ZeroSpan";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TrivialSubspace: return "TrivialSubspace";
    case ErrorCode::AllAnglesZero: return "AllAnglesZero";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateAngle: return "DegenerateAngle";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::RangeIncludesRightAngle: return "RangeIncludesRightAngle";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotExtremalCluster: return "NotExtremalCluster";
    case ErrorCode::StartNotInF: return "StartNotInF";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::BadOverlap: return "BadOverlap";
    case ErrorCode::NodesMissing: return "NodesMissing";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pangles
