#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lineguard {

enum class ErrorCode {
  kAttackerNotFasterThanTarget,  // A1: v_A > v_T violated
  kDefenderCannotOutrun,         // A2: v_A < 1 - |v_T cos phi_T| violated
  kNonPositiveAttackerSpeed,
  kNegativeTargetSpeed,
  kNonPositiveLength,
  kNonFiniteParameter,
  kDefenderOffTarget,
  kSideAmbiguous,
  kVerticalSlope,
  kCoincidentWithEndpoint,
  kImaginaryIntersection,
  kRegionMismatch,
  kUndefinedDirection,
  kNoRoot,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lineguard
