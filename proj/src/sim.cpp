#include "lineguard/sim.hpp"

#include <algorithm>
#include <cmath>

#include "lineguard/error.hpp"

namespace lineguard {

std::string_view to_string(TerminationEvent e) {
  switch (e) {
    case TerminationEvent::kTargetReached:
      return "target_reached";
    case TerminationEvent::kAligned:
      return "aligned";
    case TerminationEvent::kEndpointReached:
      return "endpoint_reached";
    case TerminationEvent::kTimeout:
      return "timeout";
  }
  return "?";
}

TargetFrameState step(const TargetFrameState& s, const Controls& c, double dt,
                      const CheckedParams& p) {
  const TargetFrameState r = state_rate(s, c, p);
  TargetFrameState n{s.xD_hat + dt * r.xD_hat, s.xA_hat + dt * r.xA_hat,
                     s.yA_hat + dt * r.yA_hat};
  n.xD_hat = std::clamp(n.xD_hat, 0.0, p.L());
  return n;
}

Vec2 naive_attacker_heading(const TargetFrameState& s, const CheckedParams& p) {
  const Vec2 d{std::clamp(s.xA_hat, 0.0, p.L()) - s.xA_hat, -s.yA_hat};
  const double n = norm(d);
  if (n == 0.0) throw Error(ErrorCode::kUndefinedDirection, "attacker is on the target");
  return (1.0 / n) * d;
}

Controls strategy_controls(const TargetFrameState& s, const StrategySpec& spec,
                           const CheckedParams& p, std::optional<Side> hint) {
  Controls c;
  switch (spec.attacker.kind) {
    case AttackerPolicy::Kind::kEquilibrium:
      c.heading_A = attacker_strategy(s, p, hint);
      break;
    case AttackerPolicy::Kind::kConstantHeading:
      c.heading_A = unit_from_angle(spec.attacker.heading);
      break;
    case AttackerPolicy::Kind::kNaive:
      c.heading_A = naive_attacker_heading(s, p);
      break;
  }
  switch (spec.defender.kind) {
    case DefenderPolicy::Kind::kEquilibrium:
      c.omega_D = defender_control(to_relative(s), s, p);
      break;
    case DefenderPolicy::Kind::kConstantOmega:
      c.omega_D = spec.defender.omega;
      break;
    case DefenderPolicy::Kind::kIdle:
      c.omega_D = 0.0;
      break;
  }
  if (s.xD_hat <= 0.0 && c.omega_D < 0.0) c.omega_D = 0.0;
  if (s.xD_hat >= p.L() && c.omega_D > 0.0) c.omega_D = 0.0;
  return c;
}

TrajectorySample make_sample(double t, const TargetFrameState& s, const CheckedParams& p,
                             const Vec2& origin0) {
  const Vec2 o = pose_at(p, origin0, t).target_origin;
  return {t,
          s,
          o + Vec2{s.xA_hat, s.yA_hat},
          o + Vec2{s.xD_hat, 0.0},
          o,
          o + Vec2{p.L(), 0.0}};
}

Trajectory simulate(const TargetFrameState& s0, const StrategySpec& spec, const SimConfig& cfg,
                    const CheckedParams& p, const Vec2& origin0) {
  if (!(cfg.dt > 0.0) || !(cfg.max_time > 0.0) || !(cfg.eps_event >= 0.0) ||
      cfg.record_every < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "simulation needs dt > 0, max_time > 0, eps_event >= 0, record_every >= 1");
  }
  if (spec.defender.kind == DefenderPolicy::Kind::kConstantOmega &&
      !(std::abs(spec.defender.omega) <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "constant defender omega must lie in [-1, 1]");
  }
  check_state(s0, p);

  Trajectory traj;
  try {
    traj.region_at_start = classify(s0, p);
  } catch (const Error&) {
  }

  const double eps = cfg.eps_event;
  const double L = p.L();
  std::optional<Side> hint;
  TargetFrameState s = s0;
  long k = 0;
  double t = 0.0;

  auto finish = [&](TerminationEvent ev, double tf, const TargetFrameState& sf,
                    std::optional<double> payoff) {
    traj.event = ev;
    traj.t_final = tf;
    traj.final_state = sf;
    traj.payoff = payoff;
    if (cfg.record && (traj.samples.empty() || traj.samples.back().t < tf)) {
      traj.samples.push_back(make_sample(tf, sf, p, origin0));
    }
    return traj;
  };

  while (true) {
    if (cfg.record && k % cfg.record_every == 0) {
      traj.samples.push_back(make_sample(t, s, p, origin0));
    }
    const double X = s.xA_hat - s.xD_hat;
    if (s.yA_hat != 0.0) hint = resolve_side(s.yA_hat);
    if (std::abs(X) <= eps) {
      return finish(TerminationEvent::kAligned, t, s, -std::hypot(X, s.yA_hat));
    }
    const double xE = X > 0.0 ? L : 0.0;
    if (std::abs(s.xD_hat - xE) <= eps) {
      return finish(TerminationEvent::kEndpointReached, t, s, -std::hypot(X, s.yA_hat));
    }
    if (t >= cfg.max_time) return finish(TerminationEvent::kTimeout, t, s, std::nullopt);

    const Controls c = strategy_controls(s, spec, p, hint);
    const TargetFrameState r = state_rate(s, c, p);
    const TargetFrameState n{s.xD_hat + cfg.dt * r.xD_hat, s.xA_hat + cfg.dt * r.xA_hat,
                             s.yA_hat + cfg.dt * r.yA_hat};

    // Earliest crossing within the step; ties resolve in the order listed.
    double best_f = 2.0;
    TerminationEvent best_ev = TerminationEvent::kTimeout;
    auto offer = [&](double f, TerminationEvent ev) {
      if (f < best_f) {
        best_f = f;
        best_ev = ev;
      }
    };
    if (s.yA_hat != 0.0 && (n.yA_hat == 0.0 || (n.yA_hat > 0.0) != (s.yA_hat > 0.0))) {
      const double f = s.yA_hat / (s.yA_hat - n.yA_hat);
      const double xa = s.xA_hat + f * (n.xA_hat - s.xA_hat);
      if (xa >= -eps && xa <= L + eps) offer(f, TerminationEvent::kTargetReached);
    }
    const double Xn = n.xA_hat - n.xD_hat;
    if (std::abs(Xn) <= eps) {
      offer((std::abs(X) - eps) / (std::abs(X) - std::abs(Xn)), TerminationEvent::kAligned);
    } else if ((Xn > 0.0) != (X > 0.0)) {
      offer(X / (X - Xn), TerminationEvent::kAligned);
    }
    if (n.xD_hat != s.xD_hat && (n.xD_hat - xE) * (s.xD_hat - xE) <= 0.0) {
      offer((xE - s.xD_hat) / (n.xD_hat - s.xD_hat), TerminationEvent::kEndpointReached);
    }

    if (best_f <= 1.0) {
      const double f = std::clamp(best_f, 0.0, 1.0);
      const TargetFrameState e{s.xD_hat + f * (n.xD_hat - s.xD_hat),
                               s.xA_hat + f * (n.xA_hat - s.xA_hat),
                               s.yA_hat + f * (n.yA_hat - s.yA_hat)};
      const double Xe = e.xA_hat - e.xD_hat;
      const double payoff = best_ev == TerminationEvent::kTargetReached
                                ? std::abs(Xe)
                                : -std::hypot(Xe, e.yA_hat);
      return finish(best_ev, t + f * cfg.dt, e, payoff);
    }

    s = n;
    s.xD_hat = std::clamp(s.xD_hat, 0.0, L);
    ++k;
    t = static_cast<double>(k) * cfg.dt;
  }
}

}  // namespace lineguard
