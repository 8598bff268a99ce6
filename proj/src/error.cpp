#include "cablesea/error.hpp"

namespace cablesea {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::kConstantPolynomial: return "ConstantPolynomial";
    case ErrorCode::kImaginaryAxisRoot: return "ImaginaryAxisRoot";
    case ErrorCode::kNotCoprime: return "NotCoprime";
    case ErrorCode::kSingularSylvester: return "SingularSylvester";
    case ErrorCode::kDegreeMismatch: return "DegreeMismatch";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kAlgebraicLoop: return "AlgebraicLoop";
    case ErrorCode::kPoleOnAxis: return "PoleOnAxis";
    case ErrorCode::kNotStrictlyProper: return "NotStrictlyProper";
    case ErrorCode::kUnstable: return "Unstable";
    case ErrorCode::kImproper: return "Improper";
    case ErrorCode::kStepTooLarge: return "StepTooLarge";
    case ErrorCode::kNotSettled: return "NotSettled";
    case ErrorCode::kOverdampedRequired: return "OverdampedRequired";
    case ErrorCode::kComplexPoles: return "ComplexPoles";
    case ErrorCode::kRepeatedPoles: return "RepeatedPoles";
    case ErrorCode::kInfiniteCost: return "InfiniteCost";
    case ErrorCode::kNonMinimumPhasePlant: return "NonMinimumPhasePlant";
    case ErrorCode::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kUnstableLoop: return "UnstableLoop";
    case ErrorCode::kScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

}  // namespace cablesea
