#include "lineguard/value.hpp"

#include <cmath>
#include <numbers>

#include "lineguard/error.hpp"

namespace lineguard {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Direction require_direction(double X) {
  auto d = direction_of(X);
  if (!d) {
    throw Error(ErrorCode::kUndefinedDirection, "value needs X != 0");
  }
  return *d;
}

double side_sign(Side s) { return s == Side::kAbove ? 1.0 : -1.0; }

double eq_slope(const CheckedParams& p, Direction lambda, Side side) {
  return slope(attacker_heading_inf(p, lambda, side), as_int(lambda), p);
}

double s0_value(const TargetFrameState& s, const CheckedParams& p) {
  const double X = s.xA_hat - s.xD_hat;
  const Direction lambda = require_direction(X);
  const int lam = as_int(lambda);
  const EndpointAiming ea = endpoint_aiming(s, p);
  if (s.yA_hat == 0.0) {
    // Y/m★ is 0/0 on the line; use the travel time instead.
    const double dXdt =
        p.v_A() * ea.heading_inertial.x - p.target_velocity().x - lam;
    return lam * (X + dXdt * intercept_time(s, p));
  }
  const double m = slope(ea.heading_inertial, lam, p);
  return lam * (X - s.yA_hat / m);
}

double race_value(const TargetFrameState& s, const CheckedParams& p, Region region,
                  std::optional<Side> hint) {
  const double X = s.xA_hat - s.xD_hat;
  const int lam = as_int(require_direction(X));
  const Vec2 h = attacker_strategy(s, p, region, hint);
  const double t = endpoint_race(s, p).t_f2;
  const Vec2 vT = p.target_velocity();
  const double Xf = X + (p.v_A() * h.x - vT.x - lam) * t;
  const double Yf = s.yA_hat + (p.v_A() * h.y - vT.y) * t;
  return -std::hypot(Xf, Yf);
}

double dispatch(const TargetFrameState& s, const CheckedParams& p, Region region,
                std::optional<Side> hint) {
  const RelativeState rel = to_relative(s);
  switch (region) {
    case Region::kS1a:
      return value_attacker_inf(rel, p, hint);
    case Region::kS0:
      return s0_value(s, p);
    case Region::kS1d:
      return value_defender_inf(rel, p, hint);
    case Region::kS2:
    case Region::kS3:
      return race_value(s, p, region, hint);
  }
  throw Error(ErrorCode::kRegionMismatch, "unknown region");
}

// Counter-clockwise angle from a to b in [0, 2 pi).
double ccw(double a, double b) {
  double d = std::fmod(b - a, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

}  // namespace

double value_attacker_inf(const RelativeState& rel, const CheckedParams& p,
                          std::optional<Side> hint) {
  const Direction lambda = require_direction(rel.X);
  if (rel.Y == 0.0) return std::abs(rel.X);
  const double m = eq_slope(p, lambda, resolve_side(rel.Y, hint));
  return as_int(lambda) * (rel.X - rel.Y / m);
}

double value_attacker_finite(const TargetFrameState& s, const CheckedParams& p,
                             std::optional<Side> hint) {
  const Region r = classify(s, p, hint);
  if (!is_attacker_win(r)) {
    throw Error(ErrorCode::kRegionMismatch, "state is not in the attacker-win set");
  }
  return dispatch(s, p, r, hint);
}

double value_defender_inf(const RelativeState& rel, const CheckedParams& p,
                          std::optional<Side> hint) {
  if (rel.X == 0.0) return -std::abs(rel.Y);
  const Direction lambda = *direction_of(rel.X);
  const Side side = resolve_side(rel.Y, hint);
  const double m = eq_slope(p, lambda, side);
  return side_sign(side) * (m * rel.X - rel.Y);
}

double value_defender_finite(const TargetFrameState& s, const CheckedParams& p,
                             std::optional<Side> hint) {
  const Region r = classify(s, p, hint);
  if (is_attacker_win(r)) {
    throw Error(ErrorCode::kRegionMismatch, "state is not in the defender-win set");
  }
  return dispatch(s, p, r, hint);
}

RegionValue value_of(const TargetFrameState& s, const CheckedParams& p,
                     std::optional<Side> hint) {
  const Region r = classify(s, p, hint);
  return {r, dispatch(s, p, r, hint)};
}

Evaluation game_value(const TargetFrameState& s, const CheckedParams& p,
                      std::optional<Side> hint) {
  Evaluation ev;
  ev.region = classify(s, p, hint);
  ev.value = dispatch(s, p, ev.region, hint);

  const RelativeState rel = to_relative(s);
  try {
    Controls c;
    c.omega_D = defender_control(rel, s, p);
    c.heading_A = attacker_strategy(s, p, ev.region, hint);
    ev.controls = c;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSideAmbiguous && e.code() != ErrorCode::kUndefinedDirection) {
      throw;
    }
  }

  auto lambda = direction_of(rel.X);
  if (!lambda) return ev;
  Diagnostics& d = ev.diagnostics;
  d.race = endpoint_race(s, p);
  std::optional<Side> side;
  if (s.yA_hat != 0.0) {
    side = resolve_side(s.yA_hat);
  } else if (hint) {
    side = hint;
  }
  if (side) {
    d.eta = solve_eta(p, *lambda, *side);
    d.aim_x = aim_x(s, p, side);
  }
  switch (ev.region) {
    case Region::kS1a:
    case Region::kS1d:
      if (side) d.slope = eq_slope(p, *lambda, *side);
      break;
    case Region::kS0:
      d.endpoint = endpoint_aiming(s, p);
      if (s.yA_hat != 0.0) d.slope = slope(d.endpoint->heading_inertial, as_int(*lambda), p);
      break;
    case Region::kS2:
      d.alignment = alignment_geometry(s, p, hint);
      break;
    case Region::kS3:
      break;
  }
  return ev;
}

std::string_view to_string(BarrierTag t) {
  switch (t) {
    case BarrierTag::kLinear:
      return "linear";
    case BarrierTag::kCircular:
      return "circular";
    case BarrierTag::kJunction:
      return "junction";
  }
  return "?";
}

BarrierCurve barrier_curve(double xD_hat, const CheckedParams& p, int n_samples) {
  if (!(xD_hat >= 0.0 && xD_hat <= p.L())) {
    throw Error(ErrorCode::kDefenderOffTarget, "barrier needs xD_hat in [0, L]");
  }
  if (n_samples < 1) throw Error(ErrorCode::kInvalidConfig, "barrier needs n_samples >= 1");

  BarrierCurve curve;
  curve.xD_hat = xD_hat;
  const Vec2 vT = p.target_velocity();
  for (Direction lambda : {Direction::kPositive, Direction::kNegative}) {
    const int lam = as_int(lambda);
    const double xE = lambda == Direction::kPositive ? p.L() : 0.0;
    const double t_f2 = std::abs(xE - xD_hat);
    if (t_f2 == 0.0) continue;
    const Vec2 C = Vec2{xE, 0.0} + t_f2 * vT;
    const double r = p.v_A() * t_f2;
    curve.arcs.push_back({lambda, C, r, t_f2});

    const double reach = std::sqrt(r * r - C.y * C.y);
    const double a_outer = std::atan2(-C.y, lam * reach);
    const double a_inner = std::atan2(-C.y, -lam * reach);

    for (Side side : {Side::kAbove, Side::kBelow}) {
      const Vec2 h = attacker_heading_inf(p, lambda, side);
      const double m = slope(h, lam, p);
      const double mB = slope(h, 0.0, p);
      // Along X = s on the ray, aim_x = xD + s k.
      const double k = 1.0 - m / mB;
      if (k == 0.0) continue;
      const double sx = (xE - xD_hat) / k;
      if (!(sx * lam > 0.0)) continue;

      const Vec2 dir = (1.0 / std::hypot(1.0, m)) * Vec2{static_cast<double>(lam), lam * m};
      const Vec2 ray_normal{-dir.y, dir.x};
      for (int i = 0; i < n_samples; ++i) {
        const double sv = sx * i / n_samples;
        curve.points.push_back(
            {{xD_hat + sv, m * sv}, ray_normal, BarrierTag::kLinear, lambda, side});
      }
      const Vec2 junction{xD_hat + sx, m * sx};
      curve.points.push_back({junction, ray_normal, BarrierTag::kJunction, lambda, side});
      curve.junction_gaps.push_back(std::abs(norm(junction - C) - r));

      const double a0 = std::atan2(junction.y - C.y, junction.x - C.x);
      const double span = ccw(a0, a_outer);
      const double da = ccw(a0, a_inner) < span ? span - kTwoPi : span;
      for (int i = 1; i <= n_samples; ++i) {
        const double a = (i == n_samples) ? a0 + da : a0 + da * i / n_samples;
        Vec2 pos = C + r * unit_from_angle(a);
        if (i == n_samples) pos = {C.x + lam * reach, 0.0};
        curve.points.push_back(
            {pos, unit_from_angle(a), BarrierTag::kCircular, lambda, side});
      }
    }
  }
  return curve;
}

std::optional<Vec2> refine_barrier_point(const BarrierPoint& pt, double xD_hat,
                                         const CheckedParams& p, double half_width) {
  auto wins = [&](double t) {
    const Vec2 q = pt.pos + t * pt.normal;
    return is_attacker_win(classify({xD_hat, q.x, q.y}, p, pt.side));
  };
  double lo = -half_width;
  double hi = half_width;
  const bool w_lo = wins(lo);
  if (w_lo == wins(hi)) return std::nullopt;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (wins(mid) == w_lo ? lo : hi) = mid;
  }
  return pt.pos + (0.5 * (lo + hi)) * pt.normal;
}

std::array<double, 3> value_defender_inf_gradient(const TargetFrameState& s,
                                                  const CheckedParams& p) {
  const Direction lambda = require_direction(s.xA_hat - s.xD_hat);
  const Side side = resolve_side(s.yA_hat);
  const double m = eq_slope(p, lambda, side);
  const double sg = side_sign(side);
  return {-sg * m, sg * m, -sg};
}

double hji_hamiltonian(const TargetFrameState& s, const CheckedParams& p, double m,
                       const Controls& c) {
  const double sg = side_sign(resolve_side(s.yA_hat));
  const TargetFrameState f = state_rate(s, c, p);
  return sg * (-m * f.xD_hat + m * f.xA_hat - f.yA_hat);
}

double hji_residual_for_slope(const TargetFrameState& s, const CheckedParams& p, double m) {
  const double sg = side_sign(resolve_side(s.yA_hat));
  const Vec2 vT = p.target_velocity();
  // min over |omega| <= 1 of -sg m omega, max over headings of sg v_A (m cos - sin).
  return -std::abs(m) + p.v_A() * std::hypot(1.0, m) + sg * (-m * vT.x + vT.y);
}

double hji_residual(const TargetFrameState& s, const CheckedParams& p) {
  const Direction lambda = require_direction(s.xA_hat - s.xD_hat);
  const double m = eq_slope(p, lambda, resolve_side(s.yA_hat));
  return hji_residual_for_slope(s, p, m);
}

}  // namespace lineguard
