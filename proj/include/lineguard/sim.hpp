#pragma once

// Forward integration of the target-frame dynamics with event detection.

#include <optional>
#include <string_view>
#include <vector>

#include "lineguard/equilibrium.hpp"

namespace lineguard {

struct AttackerPolicy {
  enum class Kind { kEquilibrium, kConstantHeading, kNaive };
  Kind kind = Kind::kEquilibrium;
  double heading = 0.0;  // inertial angle, radians; kConstantHeading only

  static AttackerPolicy equilibrium() { return {}; }
  static AttackerPolicy constant(double radians) { return {Kind::kConstantHeading, radians}; }
  static AttackerPolicy naive() { return {Kind::kNaive, 0.0}; }
};

struct DefenderPolicy {
  enum class Kind { kEquilibrium, kConstantOmega, kIdle };
  Kind kind = Kind::kEquilibrium;
  double omega = 0.0;  // kConstantOmega only, |omega| <= 1

  static DefenderPolicy equilibrium() { return {}; }
  static DefenderPolicy constant(double omega) { return {Kind::kConstantOmega, omega}; }
  static DefenderPolicy idle() { return {Kind::kIdle, 0.0}; }
};

struct StrategySpec {
  AttackerPolicy attacker;
  DefenderPolicy defender;
};

struct SimConfig {
  double dt = 1e-4;
  double max_time = 100.0;
  double eps_event = 1e-9;
  bool record = true;
  int record_every = 1;
};

enum class TerminationEvent {
  kTargetReached,    // attacker crosses the line on the segment
  kAligned,          // X reaches zero off the target
  kEndpointReached,  // defender arrives at the relevant endpoint
  kTimeout,
};

std::string_view to_string(TerminationEvent e);

struct TrajectorySample {
  double t = 0.0;
  TargetFrameState state;
  Vec2 attacker{};  // inertial
  Vec2 defender{};
  Vec2 target_left{};
  Vec2 target_right{};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TerminationEvent event = TerminationEvent::kTimeout;
  double t_final = 0.0;
  std::optional<double> payoff;  // empty on timeout
  std::optional<Region> region_at_start;
  TargetFrameState final_state;
};

// Explicit Euler step with the defender clamped to [0, L] afterwards.
TargetFrameState step(const TargetFrameState& s, const Controls& c, double dt,
                      const CheckedParams& p);

// Inertial heading toward the nearest point of the segment, taken in the
// target frame with no drift compensation.
Vec2 naive_attacker_heading(const TargetFrameState& s, const CheckedParams& p);

// Controls the strategy pair plays at s. hint carries the last approach side.
Controls strategy_controls(const TargetFrameState& s, const StrategySpec& spec,
                           const CheckedParams& p, std::optional<Side> hint);

TrajectorySample make_sample(double t, const TargetFrameState& s, const CheckedParams& p,
                             const Vec2& origin0);

Trajectory simulate(const TargetFrameState& s0, const StrategySpec& spec, const SimConfig& cfg,
                    const CheckedParams& p, const Vec2& origin0 = {});

}  // namespace lineguard
