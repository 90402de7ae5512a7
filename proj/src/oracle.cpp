#include "lineguard/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lineguard/error.hpp"
#include "lineguard/parallel.hpp"

namespace lineguard {

double eta_by_bisection(const CheckedParams& p, Direction lambda, Side side) {
  // Bisect on the heading angle; eta = tan(theta) so the bracket is finite.
  auto f = [&](double th) {
    const Vec2& u = p.target_dir();
    return p.v_A() - p.v_T() * (std::sin(th) * u.y + as_int(lambda) * std::cos(th) * u.x) -
           std::cos(th);
  };
  const double edge = side == Side::kBelow ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
  double lo = std::min(0.0, edge);
  double hi = std::max(0.0, edge);
  const bool neg_lo = f(lo) < 0.0;
  if (neg_lo == (f(hi) < 0.0)) {
    throw Error(ErrorCode::kNoRoot, "terminal Hamiltonian has no sign change on the bracket");
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ((f(mid) < 0.0) == neg_lo ? lo : hi) = mid;
  }
  return std::tan(0.5 * (lo + hi));
}

BestResponse best_response_attacker(const TargetFrameState& s0, const CheckedParams& p,
                                    int n_headings, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.record = false;
  std::vector<std::optional<double>> payoffs(static_cast<std::size_t>(n_headings));
  auto angle = [&](std::size_t i) { return 2.0 * std::numbers::pi * i / n_headings; };
  parallel_for(payoffs.size(), [&](std::size_t i) {
    const StrategySpec spec{AttackerPolicy::constant(angle(i)), DefenderPolicy::equilibrium()};
    payoffs[i] = simulate(s0, spec, c, p).payoff;
  });
  BestResponse br;
  br.payoff = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (!payoffs[i]) {
      ++br.timeouts;
    } else if (*payoffs[i] > br.payoff) {
      br.payoff = *payoffs[i];
      br.control = angle(i);
    }
  }
  return br;
}

BestResponse best_response_defender(const TargetFrameState& s0, const CheckedParams& p,
                                    int n_omegas, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.record = false;
  std::vector<std::optional<double>> payoffs(static_cast<std::size_t>(n_omegas));
  auto omega = [&](std::size_t i) {
    return n_omegas == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / (n_omegas - 1);
  };
  parallel_for(payoffs.size(), [&](std::size_t i) {
    const StrategySpec spec{AttackerPolicy::equilibrium(), DefenderPolicy::constant(omega(i))};
    payoffs[i] = simulate(s0, spec, c, p).payoff;
  });
  BestResponse br;
  br.payoff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (!payoffs[i]) {
      ++br.timeouts;
    } else if (*payoffs[i] < br.payoff) {
      br.payoff = *payoffs[i];
      br.control = omega(i);
    }
  }
  return br;
}

GameParams random_valid_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  while (true) {
    GameParams g;
    g.v_A = 0.05 + 0.9 * u01(rng);
    g.v_T = g.v_A * u01(rng);
    g.phi_T = std::numbers::pi * (2.0 * u01(rng) - 1.0);
    g.L = 0.3 + 1.7 * u01(rng);
    if (g.v_A > g.v_T && g.v_A < 1.0 - std::abs(g.v_T * std::cos(g.phi_T))) return g;
  }
}

std::vector<TargetFrameState> sample_region_states(const CheckedParams& p, Region region,
                                                   int count, double margin,
                                                   std::mt19937_64& rng, int max_tries) {
  const double L = p.L();
  std::uniform_real_distribution<double> ud(0.0, L);
  std::uniform_real_distribution<double> ua(-L, 2.0 * L);
  std::uniform_real_distribution<double> uy(-L, L);
  std::vector<TargetFrameState> out;
  for (int tries = 0; tries < max_tries && static_cast<int>(out.size()) < count; ++tries) {
    const double xD = ud(rng);
    const double xA = ua(rng);
    const double yA = uy(rng);
    const TargetFrameState s{xD, xA, yA};
    if (std::abs(xA - xD) < margin || std::abs(yA) < margin) continue;
    const RegionValue rv = value_of(s, p);
    if (rv.region == region && std::abs(rv.value) >= margin) out.push_back(s);
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorCode::kNoRoot,
                "could not sample enough states in region " + std::string(to_string(region)));
  }
  return out;
}

bool CheckReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

namespace {

constexpr Region kAllRegions[] = {Region::kS1a, Region::kS0, Region::kS1d, Region::kS2,
                                  Region::kS3};

void add(CheckReport& rep, std::string name, double measured, double bound) {
  // NaN never passes.
  rep.results.push_back({std::move(name), measured, bound, measured <= bound});
}

double biased_slope(const CheckedParams& p, Direction lambda, Side side, double bias) {
  const double eta = solve_eta(p, lambda, side).eta + bias;
  return slope(heading_from_eta(lambda, eta), as_int(lambda), p);
}

}  // namespace

CheckReport run_checks(const CheckedParams& p, const CheckOptions& opt) {
  CheckReport rep;
  std::mt19937_64 rng(opt.seed);

  // Closed-form eta against bisection.
  {
    std::vector<CheckedParams> params{p};
    for (int i = 0; i < opt.n_params; ++i) params.push_back(validate_params(random_valid_params(rng)));
    double worst_gap = 0.0;
    double worst_res = 0.0;
    for (const auto& q : params) {
      for (Direction lam : {Direction::kPositive, Direction::kNegative}) {
        for (Side side : {Side::kBelow, Side::kAbove}) {
          const double eta = solve_eta(q, lam, side).eta + opt.eta_bias;
          // Both errors grow with |eta| through the conditioning of tan and sqrt(1 + eta^2).
          const double scale = std::max(1.0, std::abs(eta));
          worst_gap = std::max(worst_gap, std::abs(eta - eta_by_bisection(q, lam, side)) / scale);
          worst_res = std::max(worst_res, std::abs(terminal_hamiltonian(q, lam, eta)) / scale);
        }
      }
    }
    add(rep, "eta_oracle_agreement", worst_gap, opt.eta_tol);
    add(rep, "eta_terminal_residual", worst_res, opt.residual_tol);
  }

  // HJI residual and gradient in the S1d interior.
  {
    const auto states = sample_region_states(p, Region::kS1d, opt.n_hji_states, 1e-3, rng);
    double worst_res = 0.0;
    double worst_grad = 0.0;
    const double h = 1e-6;
    for (const auto& s : states) {
      const Direction lam = *direction_of(s.xA_hat - s.xD_hat);
      const Side side = resolve_side(s.yA_hat);
      const double m = biased_slope(p, lam, side, opt.eta_bias);
      worst_res = std::max(worst_res, std::abs(hji_residual_for_slope(s, p, m)));
      const double sg = side == Side::kAbove ? 1.0 : -1.0;
      const double grad[3] = {-sg * m, sg * m, -sg};
      for (int k = 0; k < 3; ++k) {
        TargetFrameState a = s;
        TargetFrameState b = s;
        double* pa = k == 0 ? &a.xD_hat : k == 1 ? &a.xA_hat : &a.yA_hat;
        double* pb = k == 0 ? &b.xD_hat : k == 1 ? &b.xA_hat : &b.yA_hat;
        *pa += h;
        *pb -= h;
        const double fd =
            (value_defender_inf(to_relative(a), p) - value_defender_inf(to_relative(b), p)) /
            (2.0 * h);
        worst_grad = std::max(worst_grad, std::abs(fd - grad[k]));
      }
    }
    add(rep, "hji_residual", worst_res, opt.hji_tol);
    add(rep, "hji_gradient", worst_grad, opt.gradient_tol);
  }

  // Equilibrium play reproduces the value, and neither player gains by a
  // constant deviation.
  {
    SimConfig cfg;
    cfg.dt = opt.dt;
    cfg.max_time = opt.max_time;
    cfg.record = false;
    double worst_sim = 0.0;
    double worst_att = 0.0;
    double worst_def = 0.0;
    for (Region r : kAllRegions) {
      for (const auto& s : sample_region_states(p, r, opt.n_sim_states, 1e-2, rng)) {
        const double v = value_of(s, p).value;
        const auto pay = simulate(s, {}, cfg, p).payoff;
        worst_sim = std::max(worst_sim, pay ? std::abs(*pay - v)
                                            : std::numeric_limits<double>::infinity());
      }
      for (const auto& s : sample_region_states(p, r, opt.n_saddle_states, 1e-2, rng)) {
        const double v = value_of(s, p).value;
        worst_att = std::max(worst_att, best_response_attacker(s, p, opt.n_headings, cfg).payoff - v);
        worst_def = std::max(worst_def, v - best_response_defender(s, p, opt.n_omegas, cfg).payoff);
      }
    }
    add(rep, "sim_value_consistency", worst_sim, opt.sim_tol);
    add(rep, "saddle_attacker_deviation", worst_att, opt.saddle_tol);
    add(rep, "saddle_defender_deviation", worst_def, opt.saddle_tol);
  }

  // Barrier points sit on the zero level set.
  {
    double worst = 0.0;
    for (int i = 0; i <= 5; ++i) {
      const double xD = p.L() * i / 5.0;
      const BarrierCurve c = barrier_curve(xD, p, 50);
      for (const auto& pt : c.points) {
        worst = std::max(worst, std::abs(value_of({xD, pt.pos.x, pt.pos.y}, p, pt.side).value));
      }
      for (double g : c.junction_gaps) worst = std::max(worst, g);
    }
    add(rep, "barrier_zero_level", worst, opt.barrier_tol);
  }
  return rep;
}

}  // namespace lineguard
