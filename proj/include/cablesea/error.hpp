#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cablesea {

enum class ErrorCode {
  kInvalidArgument,
  kZeroPolynomial,
  kConstantPolynomial,
  kImaginaryAxisRoot,
  kNotCoprime,
  kSingularSylvester,
  kDegreeMismatch,
  kZeroDenominator,
  kAlgebraicLoop,
  kPoleOnAxis,
  kNotStrictlyProper,
  kUnstable,
  kImproper,
  kStepTooLarge,
  kNotSettled,
  kOverdampedRequired,
  kComplexPoles,
  kRepeatedPoles,
  kInfiniteCost,
  kNonMinimumPhasePlant,
  kDegenerateDenominator,
  kBadSpec,
  kUnstableLoop,
  kScenarioMismatch,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (tests, the CLI, the Python module) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cablesea
