#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zncoh {

/// Every failure the library can raise. The category decides the CLI exit code.
enum class ErrorKind {
  // input validation (exit 2)
  InvalidInput,
  NotSquareFree,
  WrongOrder,
  NotUnimodular,
  NotSquare,
  NotADivisor,
  NotPrimeOrder,
  NotFreeAction,
  DegreeOutOfRange,
  NotASublattice,
  // internal invariant violations (exit 3)
  NonUnityEigenvalues,
  NonIntegralAverage,
  BadInvariantFactors,
  NonInvariantBlock,
  NonIntegralK,
  UnexpectedOrder,
  NonIntegralOrbitCount,
  NonIntegral,
  InclusionViolated,
  TorsionExponentViolation,
  // resource limits (exit 4)
  DimensionTooLarge,
};

enum class ErrorCategory { Validation, Invariant, Limit };

std::string_view to_string(ErrorKind kind);
ErrorCategory category(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return zncoh::category(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace zncoh
