#pragma once

// Brute-force verifiers for the closed forms: a bisection root for eta,
// constant-control best responses, random state samplers and a check suite.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lineguard/sim.hpp"
#include "lineguard/value.hpp"

namespace lineguard {

// Root of the terminal Hamiltonian condition on (0, 100) for kBelow or
// (-100, 0) for kAbove. Throws kNoRoot when the bracket has no sign change.
double eta_by_bisection(const CheckedParams& p, Direction lambda, Side side);

struct BestResponse {
  double payoff = 0.0;
  double control = 0.0;  // heading angle or omega
  int timeouts = 0;      // candidates that never terminated, excluded
};

// Max payoff over n_headings evenly spaced constant inertial headings against
// the equilibrium defender.
BestResponse best_response_attacker(const TargetFrameState& s0, const CheckedParams& p,
                                    int n_headings, const SimConfig& cfg);

// Min payoff over n_omegas evenly spaced constant omegas in [-1, 1] against
// the equilibrium attacker.
BestResponse best_response_defender(const TargetFrameState& s0, const CheckedParams& p,
                                    int n_omegas, const SimConfig& cfg);

// v_A in [0.05, 0.95], v_T in [0, v_A), phi_T in [-pi, pi), L in [0.3, 2],
// redrawn until both speed assumptions hold.
GameParams random_valid_params(std::mt19937_64& rng);

// Rejection sampling over xD_hat in [0, L], xA_hat in [-L, 2L],
// yA_hat in [-L, L]. Keeps states in the region with |value|, |X| and
// |yA_hat| all at least margin. Throws kNoRoot after max_tries draws.
std::vector<TargetFrameState> sample_region_states(const CheckedParams& p, Region region,
                                                   int count, double margin,
                                                   std::mt19937_64& rng,
                                                   int max_tries = 1000000);

struct CheckOptions {
  std::uint64_t seed = 1;
  int n_params = 100;
  int n_hji_states = 1000;
  int n_saddle_states = 2;  // per region
  int n_headings = 360;
  int n_omegas = 21;
  int n_sim_states = 4;  // per region
  double dt = 1e-3;
  double max_time = 20.0;

  double eta_tol = 1e-9;
  double residual_tol = 1e-10;
  double hji_tol = 1e-9;
  double gradient_tol = 1e-6;
  double saddle_tol = 3e-3;
  double sim_tol = 1e-3;
  double barrier_tol = 1e-6;

  // Fault injection: added to every closed-form eta the suite inspects.
  double eta_bias = 0.0;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;  // worst case
  double bound = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::vector<CheckResult> results;
  bool passed() const;
};

CheckReport run_checks(const CheckedParams& p, const CheckOptions& opt);

}  // namespace lineguard
