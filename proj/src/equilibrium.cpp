#include "lineguard/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lineguard/error.hpp"

namespace lineguard {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::kS1a:
      return "S1a";
    case Region::kS0:
      return "S0";
    case Region::kS1d:
      return "S1d";
    case Region::kS2:
      return "S2";
    case Region::kS3:
      return "S3";
  }
  return "?";
}

std::optional<Region> region_from_string(std::string_view s) {
  for (Region r : {Region::kS1a, Region::kS0, Region::kS1d, Region::kS2, Region::kS3}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

namespace {

Direction require_direction(double X) {
  auto d = direction_of(X);
  if (!d) {
    throw Error(ErrorCode::kUndefinedDirection,
                "defender and attacker are aligned (X = 0); sgn(X) is undefined");
  }
  return *d;
}

// Target-frame velocity of the attacker for an inertial heading.
Vec2 attacker_rate(const Vec2& heading, const CheckedParams& p) {
  return p.v_A() * heading - p.target_velocity();
}

Vec2 unit_toward(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  const double n = norm(d);
  if (n == 0.0) {
    throw Error(ErrorCode::kUndefinedDirection, "attacker already at its aim point");
  }
  return (1.0 / n) * d;
}

}  // namespace

double terminal_hamiltonian(const CheckedParams& p, Direction lambda, double eta) {
  const Vec2& u = p.target_dir();
  return p.v_A() * std::sqrt(1.0 + eta * eta) -
         p.v_T() * (eta * u.y + as_int(lambda) * u.x) - 1.0;
}

EtaSolution solve_eta(const CheckedParams& p, Direction lambda, Side side) {
  EtaSolution sol;
  sol.lambda = lambda;
  sol.side = side;
  sol.a = p.v_T() * p.target_dir().y;
  sol.b = 1.0 + as_int(lambda) * p.v_T() * p.target_dir().x;

  const double a = sol.a;
  const double b = sol.b;
  const double vA2 = p.v_A() * p.v_A();
  // Both positive under A1/A2.
  const double den = vA2 - a * a;
  const double root = p.v_A() * std::sqrt(a * a + b * b - vA2);

  // Roots (ab +/- root) / den with product -(b^2 - vA^2) / den. Take the one
  // free of cancellation and recover the other from the product.
  const double big = (a * b >= 0.0) ? (a * b + root) / den : (a * b - root) / den;
  const double other = -(b * b - vA2) / (den * big);
  sol.eta = (side == Side::kBelow) ? std::max(big, other) : std::min(big, other);
  return sol;
}

Vec2 heading_from_eta(Direction lambda, double eta) {
  const double n = std::sqrt(1.0 + eta * eta);
  return {as_int(lambda) / n, eta / n};
}

Vec2 attacker_heading_inf(const CheckedParams& p, Direction lambda, Side side) {
  return heading_from_eta(lambda, solve_eta(p, lambda, side).eta);
}

double defender_control(const RelativeState& rel, const TargetFrameState& s,
                        const CheckedParams& p) {
  double omega = 0.0;
  if (std::abs(rel.X) > p.tol().align) omega = rel.X > 0.0 ? 1.0 : -1.0;
  if (s.xD_hat <= 0.0 && omega < 0.0) omega = 0.0;
  if (s.xD_hat >= p.L() && omega > 0.0) omega = 0.0;
  return omega;
}

double slope(const Vec2& heading, double omega, const CheckedParams& p) {
  const Vec2 v = attacker_rate(heading, p);
  const double den = v.x - omega;
  if (std::abs(den) <= p.tol().compare) {
    throw Error(ErrorCode::kVerticalSlope, "relative trajectory is vertical (dX/dt = 0)");
  }
  return v.y / den;
}

double aim_x(const TargetFrameState& s, const CheckedParams& p, std::optional<Side> hint) {
  if (s.yA_hat == 0.0) return s.xA_hat;
  const Direction lambda = require_direction(s.xA_hat - s.xD_hat);
  const Side side = resolve_side(s.yA_hat, hint);
  const Vec2 v = attacker_rate(attacker_heading_inf(p, lambda, side), p);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Parallel to or moving away from the line: never crosses it.
  if (v.y * s.yA_hat >= 0.0) return v.x >= 0.0 ? kInf : -kInf;
  return s.xA_hat - s.yA_hat * v.x / v.y;
}

double relevant_endpoint(const TargetFrameState& s, const CheckedParams& p) {
  const Direction lambda = require_direction(s.xA_hat - s.xD_hat);
  return lambda == Direction::kPositive ? p.L() : 0.0;
}

EndpointAiming endpoint_aiming(const TargetFrameState& s, const CheckedParams& p) {
  EndpointAiming out;
  out.xE_hat = relevant_endpoint(s, p);
  const Vec2 d{out.xE_hat - s.xA_hat, -s.yA_hat};
  const double dist = norm(d);
  if (dist == 0.0) {
    throw Error(ErrorCode::kCoincidentWithEndpoint, "attacker coincides with the endpoint");
  }
  out.heading_hat = (1.0 / dist) * d;
  const Vec2& u = p.target_dir();
  const double vT = p.v_T();
  // Velocity triangle v_A h = v_hat h_hat + v_T u.
  const double c = cross(u, out.heading_hat);
  out.v_hat = -vT * dot(out.heading_hat, u) +
              std::sqrt(p.v_A() * p.v_A() - vT * vT * c * c);
  out.heading_inertial = (1.0 / p.v_A()) * (out.v_hat * out.heading_hat + vT * u);
  return out;
}

double intercept_time(const TargetFrameState& s, const CheckedParams& p) {
  const double xE = relevant_endpoint(s, p);
  const Vec2 d{xE - s.xA_hat, -s.yA_hat};
  const double A = p.v_A() * p.v_A() - p.v_T() * p.v_T();
  const double B = dot(d, p.target_velocity());
  const double C = dot(d, d);
  if (C == 0.0) return 0.0;
  const double sq = std::sqrt(B * B + A * C);
  return B >= 0.0 ? (B + sq) / A : C / (sq - B);
}

EndpointRace endpoint_race(const TargetFrameState& s, const CheckedParams& p) {
  EndpointRace r;
  r.xE_hat = relevant_endpoint(s, p);
  r.t_f2 = std::abs(r.xE_hat - s.xD_hat);
  r.endpoint_at_tf2 = Vec2{r.xE_hat, 0.0} + r.t_f2 * p.target_velocity();
  r.r_A = p.v_A() * r.t_f2;
  return r;
}

AlignmentGeometry alignment_geometry(const TargetFrameState& s, const CheckedParams& p,
                                     std::optional<Side> hint) {
  const EndpointRace race = endpoint_race(s, p);
  AlignmentGeometry g;
  g.t_f2 = race.t_f2;
  g.endpoint_at_tf2 = race.endpoint_at_tf2;
  g.r_A = race.r_A;
  if (race.t_f2 == 0.0) {
    g.y1 = g.y2 = race.endpoint_at_tf2.y;
    g.align_point = race.endpoint_at_tf2;
    return g;
  }
  const double dx = s.xA_hat - race.endpoint_at_tf2.x;
  const double disc = race.r_A * race.r_A - dx * dx;
  if (disc < 0.0) {
    throw Error(ErrorCode::kImaginaryIntersection,
                "attacker cannot reach the endpoint's vertical line by t_f2");
  }
  const double h = std::sqrt(disc);
  g.y1 = s.yA_hat + h;
  g.y2 = s.yA_hat - h;
  const bool above = resolve_side(s.yA_hat, hint) == Side::kAbove;
  g.align_point = {race.endpoint_at_tf2.x, above ? std::min(g.y1, g.y2) : std::max(g.y1, g.y2)};
  return g;
}

Region classify(const TargetFrameState& s, const CheckedParams& p, std::optional<Side> hint) {
  check_state(s, p);
  const double X = s.xA_hat - s.xD_hat;
  if (X == 0.0) return Region::kS1d;
  const Direction lambda = *direction_of(X);
  const int lam = as_int(lambda);
  const EndpointRace race = endpoint_race(s, p);

  const double xB = aim_x(s, p, hint);
  if (xB >= 0.0 && xB <= p.L()) {
    // On the line with X != 0 the attacker has already won.
    if (s.yA_hat == 0.0) return Region::kS1a;
    const Vec2 v = attacker_rate(attacker_heading_inf(p, lambda, resolve_side(s.yA_hat)), p);
    const double dXdt = v.x - lam;
    const double va = lam * (X - s.yA_hat * dXdt / v.y);
    if (va > 0.0) return Region::kS1a;
    // Infinite-target play only holds if alignment precedes the defender's
    // arrival at the endpoint.
    if (-X / dXdt <= race.t_f2) return Region::kS1d;
  } else if (intercept_time(s, p) < race.t_f2) {
    return Region::kS0;
  }

  const double lo = std::min(s.xD_hat, race.endpoint_at_tf2.x);
  const double hi = std::max(s.xD_hat, race.endpoint_at_tf2.x);
  if (!(s.xA_hat > lo && s.xA_hat < hi)) return Region::kS3;
  const Vec2 h = attacker_heading_inf(p, lambda, resolve_side(s.yA_hat, hint));
  const double x_star = s.xA_hat + p.v_A() * h.x * race.t_f2;
  return (x_star > lo && x_star < hi) ? Region::kS1d : Region::kS2;
}

Vec2 attacker_strategy(const TargetFrameState& s, const CheckedParams& p, Region region,
                       std::optional<Side> hint) {
  const double X = s.xA_hat - s.xD_hat;
  const Vec2 attacker{s.xA_hat, s.yA_hat};
  if (X == 0.0) {
    if (s.yA_hat == 0.0) {
      throw Error(ErrorCode::kUndefinedDirection, "attacker coincides with the defender");
    }
    return {0.0, s.yA_hat > 0.0 ? -1.0 : 1.0};
  }
  const Direction lambda = *direction_of(X);
  switch (region) {
    case Region::kS1a:
    case Region::kS1d:
      return attacker_heading_inf(p, lambda, resolve_side(s.yA_hat, hint));
    case Region::kS0:
      return endpoint_aiming(s, p).heading_inertial;
    case Region::kS2:
      return unit_toward(attacker, alignment_geometry(s, p, hint).align_point);
    case Region::kS3:
      return unit_toward(attacker, endpoint_race(s, p).endpoint_at_tf2);
  }
  throw Error(ErrorCode::kRegionMismatch, "unknown region");
}

Vec2 attacker_strategy(const TargetFrameState& s, const CheckedParams& p,
                       std::optional<Side> hint) {
  return attacker_strategy(s, p, classify(s, p, hint), hint);
}

}  // namespace lineguard
