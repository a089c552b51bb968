#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace classicality {

enum class ErrorCode {
  NonHermitianEffect,
  DimensionMismatch,
  DimensionTooLarge,
  InvalidState,
  AlphaOutOfRange,
  NotASubset,
  NonCommutingContext,
  InconsistentSharing,
  InvalidScenario,
  ScenarioTooLarge,
  DisturbingModel,
  InvalidCertificate,
  TooLarge,
  ShapeMismatch,
  DegenerateContexts,
  LabelMismatch,
  MissingProjectors,
  BadEigenvalue,
  InconsistentUnit,
  UnsharpEffectFlagged,
  DecompositionMismatch,
  EmptyAssignmentPolytope,
  InconsistentEquivalence,
  SchemaError,
  LatticeViolation,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace classicality
