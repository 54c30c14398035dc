#include "zncoh/error.hpp"

namespace zncoh {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotSquareFree: return "NotSquareFree";
    case ErrorKind::WrongOrder: return "WrongOrder";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotADivisor: return "NotADivisor";
    case ErrorKind::NotPrimeOrder: return "NotPrimeOrder";
    case ErrorKind::NotFreeAction: return "NotFreeAction";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::NotASublattice: return "NotASublattice";
    case ErrorKind::NonUnityEigenvalues: return "NonUnityEigenvalues";
    case ErrorKind::NonIntegralAverage: return "NonIntegralAverage";
    case ErrorKind::BadInvariantFactors: return "BadInvariantFactors";
    case ErrorKind::NonInvariantBlock: return "NonInvariantBlock";
    case ErrorKind::NonIntegralK: return "NonIntegralK";
    case ErrorKind::UnexpectedOrder: return "UnexpectedOrder";
    case ErrorKind::NonIntegralOrbitCount: return "NonIntegralOrbitCount";
    case ErrorKind::NonIntegral: return "NonIntegral";
    case ErrorKind::InclusionViolated: return "InclusionViolated";
    case ErrorKind::TorsionExponentViolation: return "TorsionExponentViolation";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
  }
  return "Unknown";
}

ErrorCategory category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NotSquareFree:
    case ErrorKind::WrongOrder:
    case ErrorKind::NotUnimodular:
    case ErrorKind::NotSquare:
    case ErrorKind::NotADivisor:
    case ErrorKind::NotPrimeOrder:
    case ErrorKind::NotFreeAction:
    case ErrorKind::DegreeOutOfRange:
    case ErrorKind::NotASublattice:
      return ErrorCategory::Validation;
    case ErrorKind::DimensionTooLarge:
      return ErrorCategory::Limit;
    default:
      return ErrorCategory::Invariant;
  }
}

}  // namespace zncoh
