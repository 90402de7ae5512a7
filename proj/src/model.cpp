#include "lineguard/model.hpp"

#include <cmath>
#include <sstream>

#include "lineguard/error.hpp"

namespace lineguard {

namespace {

std::string describe(const GameParams& p) {
  std::ostringstream os;
  os.precision(12);
  os << "(v_A=" << p.v_A << ", v_T=" << p.v_T << ", phi_T=" << p.phi_T
     << ", L=" << p.L << ")";
  return os.str();
}

}  // namespace

CheckedParams::CheckedParams(const GameParams& p)
    : raw_(p), target_dir_(unit_from_angle(p.phi_T)) {}

CheckedParams validate_params(const GameParams& p) {
  for (double v : {p.v_A, p.v_T, p.phi_T, p.L}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteParameter,
                  "non-finite game parameter " + describe(p));
    }
  }
  if (p.v_A <= 0.0) {
    throw Error(ErrorCode::kNonPositiveAttackerSpeed,
                "attacker speed must be positive " + describe(p));
  }
  if (p.v_T < 0.0) {
    throw Error(ErrorCode::kNegativeTargetSpeed,
                "target speed must be non-negative " + describe(p));
  }
  if (p.L <= 0.0) {
    throw Error(ErrorCode::kNonPositiveLength,
                "target length must be positive " + describe(p));
  }
  if (!(p.v_A > p.v_T)) {
    throw Error(ErrorCode::kAttackerNotFasterThanTarget,
                "assumption A1 violated: need v_A > v_T " + describe(p));
  }
  if (!(p.v_A < 1.0 - std::abs(p.v_T * std::cos(p.phi_T)))) {
    throw Error(ErrorCode::kDefenderCannotOutrun,
                "assumption A2 violated: need v_A < 1 - |v_T cos(phi_T)| " +
                    describe(p));
  }
  for (double t : {p.tol.event, p.tol.align, p.tol.compare}) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::kNonFiniteParameter,
                  "tolerances must be finite and non-negative");
    }
  }
  return CheckedParams(p);
}

std::optional<Direction> direction_of(double x) {
  if (x > 0.0) return Direction::kPositive;
  if (x < 0.0) return Direction::kNegative;
  return std::nullopt;
}

Side resolve_side(double yA_hat, std::optional<Side> hint) {
  if (yA_hat > 0.0) return Side::kAbove;
  if (yA_hat < 0.0) return Side::kBelow;
  if (hint) return *hint;
  throw Error(ErrorCode::kSideAmbiguous,
              "attacker is on the target line off the segment; approach side "
              "is ambiguous without a hint");
}

RelativeState to_relative(const TargetFrameState& s) {
  return {s.xA_hat - s.xD_hat, s.yA_hat};
}

Vec2 frame_transform(const Vec2& pos, const InertialPose& pose, FrameDirection dir) {
  return dir == FrameDirection::kToTarget ? pos - pose.target_origin
                                          : pos + pose.target_origin;
}

InertialPose pose_at(const CheckedParams& p, const Vec2& origin0, double t) {
  return {t, origin0 + t * p.target_velocity()};
}

TargetFrameState state_rate(const TargetFrameState&, const Controls& c,
                            const CheckedParams& p) {
  const Vec2 vT = p.target_velocity();
  return {c.omega_D, p.v_A() * c.heading_A.x - vT.x, p.v_A() * c.heading_A.y - vT.y};
}

void check_state(const TargetFrameState& s, const CheckedParams& p) {
  if (!std::isfinite(s.xD_hat) || !std::isfinite(s.xA_hat) || !std::isfinite(s.yA_hat)) {
    throw Error(ErrorCode::kNonFiniteParameter, "non-finite state component");
  }
  if (s.xD_hat < 0.0 || s.xD_hat > p.L()) {
    throw Error(ErrorCode::kDefenderOffTarget,
                "defender position xD_hat must lie in [0, L]");
  }
}

}  // namespace lineguard
