#pragma once

// Game parameters, state types and frame transforms for the translating-line
// guarding game.
//
// Conventions:
//   * The target is a segment of length L aligned with the inertial x-axis.
//     Its leftmost point translates with constant velocity v_T (cos phi_T,
//     sin phi_T).
//   * The defender rides on the target; its speed relative to the target is
//     omega_D in [-1, 1] (the unit of speed).
//   * The target frame is the non-rotating frame attached to the leftmost
//     target point. States are (xD_hat, xA_hat, yA_hat) in that frame.

#include <optional>

#include "lineguard/vec2.hpp"

namespace lineguard {

struct Tolerances {
  // Event detection, state units.
  double event = 1e-9;
  // Defender dead-band around X = 0.
  double align = 1e-9;
  // General floating-point comparisons.
  double compare = 1e-12;
};

// Raw, unchecked parameters as read from a config or the command line.
struct GameParams {
  double v_A = 0.0;
  double v_T = 0.0;
  double phi_T = 0.0;  // radians
  double L = 1.0;
  Tolerances tol{};
};

// Parameters that satisfied A1/A2 and positivity when constructed. Every
// solver entry point takes this type, so an invalid game can never reach the
// closed forms.
class CheckedParams {
 public:
  double v_A() const { return raw_.v_A; }
  double v_T() const { return raw_.v_T; }
  double phi_T() const { return raw_.phi_T; }
  double L() const { return raw_.L; }
  const Tolerances& tol() const { return raw_.tol; }

  // Unit target heading (cos phi_T, sin phi_T).
  const Vec2& target_dir() const { return target_dir_; }
  // Target velocity v_T * target_dir().
  Vec2 target_velocity() const { return v_T() * target_dir_; }

  const GameParams& raw() const { return raw_; }

 private:
  friend CheckedParams validate_params(const GameParams& p);
  explicit CheckedParams(const GameParams& p);

  GameParams raw_;
  Vec2 target_dir_;
};

// Throws Error with a code naming the violated assumption.
CheckedParams validate_params(const GameParams& p);

struct TargetFrameState {
  double xD_hat = 0.0;
  double xA_hat = 0.0;
  double yA_hat = 0.0;

  friend bool operator==(const TargetFrameState&, const TargetFrameState&) = default;
};

// Attacker position relative to the defender.
struct RelativeState {
  double X = 0.0;
  double Y = 0.0;
};

// Inertial position of the target's leftmost point at elapsed time t.
struct InertialPose {
  double t = 0.0;
  Vec2 target_origin{};
};

struct Controls {
  double omega_D = 0.0;
  Vec2 heading_A{1.0, 0.0};  // inertial unit heading
};

// Sign of x - x_D in the relative plane; the defender's equilibrium
// direction of motion.
enum class Direction : int { kNegative = -1, kPositive = 1 };

// Which side of the target line the attacker approaches from.
enum class Side { kBelow, kAbove };

constexpr int as_int(Direction d) { return static_cast<int>(d); }

// Returns nullopt for x == 0.
std::optional<Direction> direction_of(double x);

// Side from the sign of yA_hat; ties fall back to the hint, otherwise throw
// kSideAmbiguous.
Side resolve_side(double yA_hat, std::optional<Side> hint = std::nullopt);

RelativeState to_relative(const TargetFrameState& s);

enum class FrameDirection { kToTarget, kToInertial };

Vec2 frame_transform(const Vec2& pos, const InertialPose& pose, FrameDirection dir);

// Pose of the target frame at time t, given its origin at t = 0.
InertialPose pose_at(const CheckedParams& p, const Vec2& origin0, double t);

// Time derivative of the target-frame state for the given controls.
TargetFrameState state_rate(const TargetFrameState& s, const Controls& c,
                            const CheckedParams& p);

// Throws kDefenderOffTarget if xD_hat is outside [0, L].
void check_state(const TargetFrameState& s, const CheckedParams& p);

}  // namespace lineguard
