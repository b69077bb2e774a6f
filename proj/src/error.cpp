#include "equideg/error.hpp"

namespace equideg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPermutationInput: return "NonPermutationInput";
    case ErrorCode::ClosureCapExceeded: return "ClosureCapExceeded";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::NonIntegralMultiplicity: return "NonIntegralMultiplicity";
    case ErrorCode::NonIntegralTrace: return "NonIntegralTrace";
    case ErrorCode::InfiniteSubgroup: return "InfiniteSubgroup";
    case ErrorCode::InfiniteWeyl: return "InfiniteWeyl";
    case ErrorCode::StabilizationFailure: return "StabilizationFailure";
    case ErrorCode::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case ErrorCode::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InsufficientHorizon: return "InsufficientHorizon";
    case ErrorCode::AlphaIsCritical: return "AlphaIsCritical";
    case ErrorCode::NotIsolated: return "NotIsolated";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::EquivarianceViolation: return "EquivarianceViolation";
    case ErrorCode::NonScalarIsotypicBlock: return "NonScalarIsotypicBlock";
    case ErrorCode::NonMonotoneCurve: return "NonMonotoneCurve";
    case ErrorCode::TrivialFixedSpace: return "TrivialFixedSpace";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::EquivarianceViolation:
    case ErrorCode::NonScalarIsotypicBlock:
    case ErrorCode::NonMonotoneCurve:
    case ErrorCode::NonPermutationInput:
    case ErrorCode::UnknownSymbol:
      return true;
    default:
      return false;
  }
}

}  // namespace equideg
