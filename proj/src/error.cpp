#include "lineguard/error.hpp"

namespace lineguard {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAttackerNotFasterThanTarget:
      return "A1";
    case ErrorCode::kDefenderCannotOutrun:
      return "A2";
    case ErrorCode::kNonPositiveAttackerSpeed:
      return "non-positive-attacker-speed";
    case ErrorCode::kNegativeTargetSpeed:
      return "negative-target-speed";
    case ErrorCode::kNonPositiveLength:
      return "non-positive-length";
    case ErrorCode::kNonFiniteParameter:
      return "non-finite-parameter";
    case ErrorCode::kDefenderOffTarget:
      return "defender-off-target";
    case ErrorCode::kSideAmbiguous:
      return "side-ambiguous";
    case ErrorCode::kVerticalSlope:
      return "vertical-slope";
    case ErrorCode::kCoincidentWithEndpoint:
      return "coincident-with-endpoint";
    case ErrorCode::kImaginaryIntersection:
      return "imaginary-intersection";
    case ErrorCode::kRegionMismatch:
      return "region-mismatch";
    case ErrorCode::kUndefinedDirection:
      return "undefined-direction";
    case ErrorCode::kNoRoot:
      return "no-root";
    case ErrorCode::kInvalidConfig:
      return "invalid-config";
  }
  return "unknown";
}

}  // namespace lineguard
