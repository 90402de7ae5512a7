#pragma once

// Closed-form equilibrium feedback strategies and strategic-region
// classification.
//
// Geometry used throughout: queries are answered in the inertial frame whose
// origin coincides with the target frame at the query instant, so an
// attacker target-frame position (xA_hat, yA_hat) is also its "inertial"
// position for the purposes of the endpoint race and alignment point.

#include <optional>
#include <string_view>

#include "lineguard/model.hpp"

namespace lineguard {

enum class Region { kS1a, kS0, kS1d, kS2, kS3 };

std::string_view to_string(Region r);
std::optional<Region> region_from_string(std::string_view s);

// S1a and S0 make up the attacker-win set; the rest is defender-win,
// including the barrier itself.
constexpr bool is_attacker_win(Region r) { return r == Region::kS1a || r == Region::kS0; }

struct EtaSolution {
  Direction lambda = Direction::kPositive;
  Side side = Side::kBelow;
  double a = 0.0;  // v_T sin(phi_T)
  double b = 0.0;  // 1 + lambda v_T cos(phi_T)
  double eta = 0.0;
};

// Root of the terminal Hamiltonian condition
//   v_A sqrt(1 + eta^2) - v_T (eta sin phi_T + lambda cos phi_T) - 1 = 0
// on the half-line matching the approach side (eta > 0 from below).
EtaSolution solve_eta(const CheckedParams& p, Direction lambda, Side side);

// Residual of the terminal Hamiltonian condition at eta.
double terminal_hamiltonian(const CheckedParams& p, Direction lambda, double eta);

// (cos, sin) = (lambda, eta) / sqrt(1 + eta^2).
Vec2 heading_from_eta(Direction lambda, double eta);

// Infinite-target equilibrium heading of the attacker.
Vec2 attacker_heading_inf(const CheckedParams& p, Direction lambda, Side side);

// Equilibrium defender speed: sgn(X) outside the alignment dead-band, zeroed
// when it would push the defender off the segment.
double defender_control(const RelativeState& rel, const TargetFrameState& s,
                        const CheckedParams& p);

// dY/dX of the relative trajectory for a constant inertial heading and
// defender speed. Throws kVerticalSlope when dX/dt vanishes.
double slope(const Vec2& heading, double omega, const CheckedParams& p);

// Where the infinite-target heading crosses the target line, in target-frame
// x. Returns +/-infinity when the target-frame motion is horizontal. On the
// line itself the answer is xA_hat and no approach side is needed.
double aim_x(const TargetFrameState& s, const CheckedParams& p,
             std::optional<Side> hint = std::nullopt);

// Relevant endpoint (1 + sgn X) L / 2; requires X != 0.
double relevant_endpoint(const TargetFrameState& s, const CheckedParams& p);

struct EndpointAiming {
  double xE_hat = 0.0;
  Vec2 heading_hat{};       // target-frame unit heading toward the endpoint
  double v_hat = 0.0;       // attacker speed in the target frame
  Vec2 heading_inertial{};  // inertial unit heading producing heading_hat
};

EndpointAiming endpoint_aiming(const TargetFrameState& s, const CheckedParams& p);

// Time for the attacker to reach the relevant (moving) endpoint: positive
// root of (v_A^2 - v_T^2) t^2 - 2 (d . v_T u_T) t - |d|^2 = 0, d = x_E - x_A.
double intercept_time(const TargetFrameState& s, const CheckedParams& p);

// Defender-to-endpoint race, no alignment point needed.
struct EndpointRace {
  double xE_hat = 0.0;
  double t_f2 = 0.0;
  Vec2 endpoint_at_tf2{};
  double r_A = 0.0;
};

EndpointRace endpoint_race(const TargetFrameState& s, const CheckedParams& p);

struct AlignmentGeometry {
  double t_f2 = 0.0;
  Vec2 endpoint_at_tf2{};
  double r_A = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  Vec2 align_point{};
};

// Throws kImaginaryIntersection when the attacker's reach circle misses the
// vertical line through the endpoint at t_f2. The intersection nearer the
// target line is chosen, which needs the approach side.
AlignmentGeometry alignment_geometry(const TargetFrameState& s, const CheckedParams& p,
                                     std::optional<Side> hint = std::nullopt);

// Strategic region of a state. X == 0 is defender-win (S1d).
Region classify(const TargetFrameState& s, const CheckedParams& p,
                std::optional<Side> hint = std::nullopt);

// Equilibrium inertial heading of the attacker for the given region.
Vec2 attacker_strategy(const TargetFrameState& s, const CheckedParams& p, Region region,
                       std::optional<Side> hint = std::nullopt);

Vec2 attacker_strategy(const TargetFrameState& s, const CheckedParams& p,
                       std::optional<Side> hint = std::nullopt);

}  // namespace lineguard
