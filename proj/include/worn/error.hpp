#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace worn {

enum class ErrorCode {
  InvalidInput,
  OriginOutside,
  NonConvex,
  GridMismatch,
  DegenerateIntersection,
  MeshFailure,
  SolverFailure,
  NonConvergence,
  HopfViolation,
  DimensionError,
  UncertifiedTrace,
  AtomsPresent,
  SymmetryViolation,
  StepFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OriginOutside: return "OriginOutside";
    case ErrorCode::NonConvex: return "NonConvex";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::DegenerateIntersection: return "DegenerateIntersection";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::HopfViolation: return "HopfViolation";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::UncertifiedTrace: return "UncertifiedTrace";
    case ErrorCode::AtomsPresent: return "AtomsPresent";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

}  // namespace worn
