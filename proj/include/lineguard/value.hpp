#pragma once

// Game values per region, the combined signed value, the barrier curve and
// an HJI residual checker.
//
// Sign convention: one attacker-positive scalar. Positive values are the
// attacker's terminal miss-distance; non-positive values are minus the
// terminal separation the defender secures.

#include <array>
#include <optional>
#include <vector>

#include "lineguard/equilibrium.hpp"

namespace lineguard {

// sgn(X)(X - Y/m*). Y == 0 gives |X| with no side needed.
double value_attacker_inf(const RelativeState& rel, const CheckedParams& p,
                          std::optional<Side> hint = std::nullopt);

// Throws kRegionMismatch outside the attacker-win set.
double value_attacker_finite(const TargetFrameState& s, const CheckedParams& p,
                             std::optional<Side> hint = std::nullopt);

// sgn(Y)(m* X - Y); X == 0 gives -|Y|.
double value_defender_inf(const RelativeState& rel, const CheckedParams& p,
                          std::optional<Side> hint = std::nullopt);

// Throws kRegionMismatch outside the defender-win set.
double value_defender_finite(const TargetFrameState& s, const CheckedParams& p,
                             std::optional<Side> hint = std::nullopt);

struct RegionValue {
  Region region = Region::kS1d;
  double value = 0.0;
};

// Region and value only; cheaper than game_value for sweeps.
RegionValue value_of(const TargetFrameState& s, const CheckedParams& p,
                     std::optional<Side> hint = std::nullopt);

struct Diagnostics {
  std::optional<EtaSolution> eta;
  std::optional<double> slope;  // m*, or m★ in S0
  std::optional<double> aim_x;
  std::optional<EndpointAiming> endpoint;
  std::optional<EndpointRace> race;
  std::optional<AlignmentGeometry> alignment;
};

struct Evaluation {
  Region region = Region::kS1d;
  double value = 0.0;
  // Empty on terminal states where no heading is defined.
  std::optional<Controls> controls;
  Diagnostics diagnostics;
};

Evaluation game_value(const TargetFrameState& s, const CheckedParams& p,
                      std::optional<Side> hint = std::nullopt);

enum class BarrierTag { kLinear, kCircular, kJunction };

std::string_view to_string(BarrierTag t);

struct BarrierPoint {
  Vec2 pos{};     // (xA_hat, yA_hat)
  Vec2 normal{};  // unit, for transversal probes
  BarrierTag tag = BarrierTag::kLinear;
  Direction lambda = Direction::kPositive;
  Side side = Side::kBelow;
};

struct BarrierArc {
  Direction lambda = Direction::kPositive;
  Vec2 center{};
  double radius = 0.0;
  double t_f2 = 0.0;
};

struct BarrierCurve {
  double xD_hat = 0.0;
  // Ordered per branch: ray from the defender out to the junction, then the
  // arc down to the target line.
  std::vector<BarrierPoint> points;
  std::vector<BarrierArc> arcs;
  // Distance of each ray/arc junction from its circle.
  std::vector<double> junction_gaps;
};

// n_samples points per ray and per arc. Branches where the defender already
// sits on the relevant endpoint are empty.
BarrierCurve barrier_curve(double xD_hat, const CheckedParams& p, int n_samples);

// Bisection on the attacker-win indicator along pos + t normal, t in
// [-half_width, half_width]. Returns the crossing, or nullopt when both ends
// fall on the same side.
std::optional<Vec2> refine_barrier_point(const BarrierPoint& pt, double xD_hat,
                                         const CheckedParams& p, double half_width = 1e-3);

// Analytic gradient of value_defender_inf with respect to
// (xD_hat, xA_hat, yA_hat): sgn(Y)[-m*, m*, -1].
std::array<double, 3> value_defender_inf_gradient(const TargetFrameState& s,
                                                  const CheckedParams& p);

// V_x.f for the given controls, with the gradient built from slope m.
double hji_hamiltonian(const TargetFrameState& s, const CheckedParams& p, double m,
                       const Controls& c);

// min over omega, max over heading, of V_x.f for the linear value with slope m,
// in closed form. Zero exactly when m is the equilibrium slope.
double hji_residual_for_slope(const TargetFrameState& s, const CheckedParams& p, double m);

// Residual at the equilibrium slope; meant for S1d interior states with
// Y != 0.
double hji_residual(const TargetFrameState& s, const CheckedParams& p);

}  // namespace lineguard
