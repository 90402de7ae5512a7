#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "lineguard/model.hpp"

namespace lineguard::testing {

inline CheckedParams reference_params() {
  return validate_params({0.7, 0.2, 2.0 * std::numbers::pi / 3.0, 1.0, {}});
}

inline CheckedParams stationary_params(double v_A = 0.7) {
  return validate_params({v_A, 0.0, 0.0, 1.0, {}});
}

inline GameParams reflected(const GameParams& g) {
  GameParams r = g;
  r.phi_T = std::numbers::pi - g.phi_T;
  return r;
}

}  // namespace lineguard::testing
