#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace npt {

enum class ErrorCode {
  NotSymmetric,
  DimensionMismatch,
  NonOrthonormalBasis,
  IndexOutOfRange,
  BadParameters,
  OddDimension,
  NegativeSource,
  PhaseOutOfRange,
  DirectionalityViolation,
  BadAlpha,
  ReferenceJetNotInterior,
  NonRealRoots,
  DegenerateLeadingCoefficient,
  BracketingFailure,
  NotOnBoundary,
  SingularGradient,
  StencilOutOfBounds,
  NotConverged,
  UnstableStep,
  EmptyFamily,
  BoundaryViolation,
  HypothesisViolation,
  BoundaryNode,
  Unsupported,
  UnknownKey,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NegativeSource: return "NegativeSource";
    case ErrorCode::PhaseOutOfRange: return "PhaseOutOfRange";
    case ErrorCode::DirectionalityViolation: return "DirectionalityViolation";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::ReferenceJetNotInterior: return "ReferenceJetNotInterior";
    case ErrorCode::NonRealRoots: return "NonRealRoots";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::BracketingFailure: return "BracketingFailure";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::SingularGradient: return "SingularGradient";
    case ErrorCode::StencilOutOfBounds: return "StencilOutOfBounds";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::BoundaryNode: return "BoundaryNode";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// that front ends can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace npt
