#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <string_view>

#include "lineguard/error.hpp"
#include "lineguard/oracle.hpp"
#include "lineguard/parallel.hpp"
#include "lineguard/sim.hpp"
#include "lineguard/value.hpp"

namespace lineguard::cli {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

using json = nlohmann::ordered_json;

// Rounded to 12 significant digits; non-finite values become null.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json vec(const Vec2& v) { return json::array({num(v.x), num(v.y)}); }

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, "config: " + what);
}

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) bad_config(std::string(where) + " must be an object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  require_object(j, where);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) bad_config("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& j, const char* key, T& dst, std::string_view where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad_config(std::string(where) + "." + key + " must be a string");
    dst = v.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) bad_config(std::string(where) + "." + key + " must be an integer");
    dst = v.get<T>();
  } else {
    if (!v.is_number()) bad_config(std::string(where) + "." + key + " must be a number");
    dst = v.get<T>();
  }
}

Vec2 read_pair(const json& j, const char* key, std::string_view where) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad_config(std::string(where) + "." + key + " must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

struct SweepSpec {
  double xD_hat = 0.4;
  double x_min = -0.5;
  double x_max = 1.5;
  int nx = 200;
  double y_min = -1.0;
  double y_max = 1.0;
  int ny = 200;
};

struct BarrierSpec {
  double xD_hat = 0.4;
  int samples = 100;
};

struct Inputs {
  GameParams params{0.7, 0.2, 2.0 * std::numbers::pi / 3.0, 1.0, {}};
  std::optional<TargetFrameState> state;
  Vec2 origin{};
  StrategySpec strategy;
  SimConfig sim;
  std::string format = "json";
  BarrierSpec barrier;
  SweepSpec sweep;
  CheckOptions check;
};

void parse_policy(const json& j, Inputs& in) {
  reject_unknown(j, {"attacker", "defender"}, "strategy");
  if (j.contains("attacker")) {
    const json& a = j.at("attacker");
    if (a == "equilibrium") {
      in.strategy.attacker = AttackerPolicy::equilibrium();
    } else if (a == "naive") {
      in.strategy.attacker = AttackerPolicy::naive();
    } else if (a.is_object()) {
      reject_unknown(a, {"constant_heading"}, "strategy.attacker");
      if (!a.contains("constant_heading")) bad_config("strategy.attacker needs constant_heading");
      double phi = 0.0;
      read(a, "constant_heading", phi, "strategy.attacker");
      in.strategy.attacker = AttackerPolicy::constant(phi);
    } else {
      bad_config("strategy.attacker must be \"equilibrium\", \"naive\" or {\"constant_heading\": x}");
    }
  }
  if (j.contains("defender")) {
    const json& d = j.at("defender");
    if (d == "equilibrium") {
      in.strategy.defender = DefenderPolicy::equilibrium();
    } else if (d == "idle") {
      in.strategy.defender = DefenderPolicy::idle();
    } else if (d.is_object()) {
      reject_unknown(d, {"constant_omega"}, "strategy.defender");
      if (!d.contains("constant_omega")) bad_config("strategy.defender needs constant_omega");
      double w = 0.0;
      read(d, "constant_omega", w, "strategy.defender");
      in.strategy.defender = DefenderPolicy::constant(w);
    } else {
      bad_config("strategy.defender must be \"equilibrium\", \"idle\" or {\"constant_omega\": x}");
    }
  }
}

void load_config(const std::string& path, Inputs& in) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    bad_config(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, {"params", "state", "inertial_state", "strategy", "sim", "format", "barrier",
                     "sweep", "check"},
                 "top level");
  if (j.contains("params")) {
    const json& p = j.at("params");
    reject_unknown(p, {"v_A", "v_T", "phi_T", "L", "tolerances"}, "params");
    read(p, "v_A", in.params.v_A, "params");
    read(p, "v_T", in.params.v_T, "params");
    read(p, "phi_T", in.params.phi_T, "params");
    read(p, "L", in.params.L, "params");
    if (p.contains("tolerances")) {
      const json& t = p.at("tolerances");
      reject_unknown(t, {"event", "align", "compare"}, "params.tolerances");
      read(t, "event", in.params.tol.event, "params.tolerances");
      read(t, "align", in.params.tol.align, "params.tolerances");
      read(t, "compare", in.params.tol.compare, "params.tolerances");
    }
  }
  if (j.contains("state") && j.contains("inertial_state")) {
    bad_config("give either state or inertial_state, not both");
  }
  if (j.contains("state")) {
    const json& s = j.at("state");
    reject_unknown(s, {"xD_hat", "xA_hat", "yA_hat"}, "state");
    for (const char* k : {"xD_hat", "xA_hat", "yA_hat"}) {
      if (!s.contains(k)) bad_config(std::string("state.") + k + " is required");
    }
    TargetFrameState st;
    read(s, "xD_hat", st.xD_hat, "state");
    read(s, "xA_hat", st.xA_hat, "state");
    read(s, "yA_hat", st.yA_hat, "state");
    in.state = st;
  }
  if (j.contains("inertial_state")) {
    const json& s = j.at("inertial_state");
    reject_unknown(s, {"target_origin", "defender", "attacker"}, "inertial_state");
    for (const char* k : {"target_origin", "defender", "attacker"}) {
      if (!s.contains(k)) bad_config(std::string("inertial_state.") + k + " is required");
    }
    const Vec2 o = read_pair(s, "target_origin", "inertial_state");
    const Vec2 d = read_pair(s, "defender", "inertial_state");
    const Vec2 a = read_pair(s, "attacker", "inertial_state");
    if (std::abs(d.y - o.y) > 1e-12) bad_config("inertial_state.defender must lie on the target line");
    in.origin = o;
    in.state = TargetFrameState{d.x - o.x, a.x - o.x, a.y - o.y};
  }
  if (j.contains("strategy")) parse_policy(j.at("strategy"), in);
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    reject_unknown(s, {"dt", "max_time", "eps_event", "record_every"}, "sim");
    read(s, "dt", in.sim.dt, "sim");
    read(s, "max_time", in.sim.max_time, "sim");
    read(s, "eps_event", in.sim.eps_event, "sim");
    read(s, "record_every", in.sim.record_every, "sim");
  }
  read(j, "format", in.format, "top level");
  if (j.contains("barrier")) {
    const json& b = j.at("barrier");
    reject_unknown(b, {"xD_hat", "samples"}, "barrier");
    read(b, "xD_hat", in.barrier.xD_hat, "barrier");
    read(b, "samples", in.barrier.samples, "barrier");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, {"xD_hat", "x_min", "x_max", "nx", "y_min", "y_max", "ny"}, "sweep");
    read(s, "xD_hat", in.sweep.xD_hat, "sweep");
    read(s, "x_min", in.sweep.x_min, "sweep");
    read(s, "x_max", in.sweep.x_max, "sweep");
    read(s, "nx", in.sweep.nx, "sweep");
    read(s, "y_min", in.sweep.y_min, "sweep");
    read(s, "y_max", in.sweep.y_max, "sweep");
    read(s, "ny", in.sweep.ny, "sweep");
  }
  if (j.contains("check")) {
    const json& c = j.at("check");
    reject_unknown(c,
                   {"seed", "n_params", "n_hji_states", "n_saddle_states", "n_headings", "n_omegas",
                    "n_sim_states", "dt", "max_time", "eta_tol", "residual_tol", "hji_tol",
                    "gradient_tol", "saddle_tol", "sim_tol", "barrier_tol"},
                   "check");
    CheckOptions& o = in.check;
    read(c, "seed", o.seed, "check");
    read(c, "n_params", o.n_params, "check");
    read(c, "n_hji_states", o.n_hji_states, "check");
    read(c, "n_saddle_states", o.n_saddle_states, "check");
    read(c, "n_headings", o.n_headings, "check");
    read(c, "n_omegas", o.n_omegas, "check");
    read(c, "n_sim_states", o.n_sim_states, "check");
    read(c, "dt", o.dt, "check");
    read(c, "max_time", o.max_time, "check");
    read(c, "eta_tol", o.eta_tol, "check");
    read(c, "residual_tol", o.residual_tol, "check");
    read(c, "hji_tol", o.hji_tol, "check");
    read(c, "gradient_tol", o.gradient_tol, "check");
    read(c, "saddle_tol", o.saddle_tol, "check");
    read(c, "sim_tol", o.sim_tol, "check");
    read(c, "barrier_tol", o.barrier_tol, "check");
  }
}

// Command-line overrides. Every field is optional so file values survive
// unless the flag is given.
struct Flags {
  std::string config;
  std::optional<double> v_A, v_T, phi_T, L, tol_event, tol_align, tol_compare;
  std::optional<double> xD, xA, yA;
  std::optional<std::string> attacker, defender;
  std::optional<double> heading, omega;
  std::optional<double> dt, max_time, eps_event;
  std::optional<int> record_every;
  std::optional<std::string> format;
  std::string output, summary;
  std::optional<int> samples;
  std::optional<double> x_min, x_max, y_min, y_max;
  std::optional<int> nx, ny;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_params, n_hji, n_saddle, n_sim, n_headings, n_omegas;
  std::optional<double> eta_tol, residual_tol, hji_tol, gradient_tol, saddle_tol, sim_tol,
      barrier_tol, eta_bias;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  app->add_option("--v-A", f.v_A, "attacker speed");
  app->add_option("--v-T", f.v_T, "target speed");
  app->add_option("--phi-T", f.phi_T, "target heading, radians");
  app->add_option("--length", f.L, "target length L");
  app->add_option("--tol-event", f.tol_event, "event tolerance");
  app->add_option("--tol-align", f.tol_align, "defender dead-band half-width");
  app->add_option("--tol-compare", f.tol_compare, "comparison tolerance");
  app->add_option("--output,-o", f.output, "write to this file instead of stdout");
}

void add_state(CLI::App* app, Flags& f) {
  app->add_option("--xD", f.xD, "defender xD_hat");
  app->add_option("--xA", f.xA, "attacker xA_hat");
  app->add_option("--yA", f.yA, "attacker yA_hat");
}

void add_format(CLI::App* app, Flags& f) {
  app->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

template <class T>
void apply(const std::optional<T>& src, T& dst) {
  if (src) dst = *src;
}

Inputs resolve(const Flags& f, bool wants_state) {
  Inputs in;
  if (!f.config.empty()) load_config(f.config, in);
  apply(f.v_A, in.params.v_A);
  apply(f.v_T, in.params.v_T);
  apply(f.phi_T, in.params.phi_T);
  apply(f.L, in.params.L);
  apply(f.tol_event, in.params.tol.event);
  apply(f.tol_align, in.params.tol.align);
  apply(f.tol_compare, in.params.tol.compare);
  if (wants_state && (f.xD || f.xA || f.yA)) {
    TargetFrameState s = in.state.value_or(TargetFrameState{});
    if (!in.state && !(f.xD && f.xA && f.yA)) {
      throw Error(ErrorCode::kInvalidConfig, "state needs all of --xD, --xA, --yA");
    }
    apply(f.xD, s.xD_hat);
    apply(f.xA, s.xA_hat);
    apply(f.yA, s.yA_hat);
    in.state = s;
  }
  if (f.attacker) {
    if (*f.attacker == "equilibrium") in.strategy.attacker = AttackerPolicy::equilibrium();
    if (*f.attacker == "naive") in.strategy.attacker = AttackerPolicy::naive();
    if (*f.attacker == "constant") {
      if (!f.heading && in.strategy.attacker.kind != AttackerPolicy::Kind::kConstantHeading) {
        throw Error(ErrorCode::kInvalidConfig, "--attacker constant needs --heading");
      }
      in.strategy.attacker.kind = AttackerPolicy::Kind::kConstantHeading;
    }
  }
  if (f.heading) in.strategy.attacker = AttackerPolicy::constant(*f.heading);
  if (f.defender) {
    if (*f.defender == "equilibrium") in.strategy.defender = DefenderPolicy::equilibrium();
    if (*f.defender == "idle") in.strategy.defender = DefenderPolicy::idle();
    if (*f.defender == "constant") {
      if (!f.omega && in.strategy.defender.kind != DefenderPolicy::Kind::kConstantOmega) {
        throw Error(ErrorCode::kInvalidConfig, "--defender constant needs --omega");
      }
      in.strategy.defender.kind = DefenderPolicy::Kind::kConstantOmega;
    }
  }
  if (f.omega) in.strategy.defender = DefenderPolicy::constant(*f.omega);
  apply(f.dt, in.sim.dt);
  apply(f.max_time, in.sim.max_time);
  apply(f.eps_event, in.sim.eps_event);
  apply(f.record_every, in.sim.record_every);
  apply(f.format, in.format);
  if (in.format != "json" && in.format != "csv") {
    throw Error(ErrorCode::kInvalidConfig, "format must be json or csv");
  }
  apply(f.xD, in.barrier.xD_hat);
  apply(f.samples, in.barrier.samples);
  apply(f.xD, in.sweep.xD_hat);
  apply(f.x_min, in.sweep.x_min);
  apply(f.x_max, in.sweep.x_max);
  apply(f.nx, in.sweep.nx);
  apply(f.y_min, in.sweep.y_min);
  apply(f.y_max, in.sweep.y_max);
  apply(f.ny, in.sweep.ny);
  CheckOptions& o = in.check;
  apply(f.seed, o.seed);
  apply(f.n_params, o.n_params);
  apply(f.n_hji, o.n_hji_states);
  apply(f.n_saddle, o.n_saddle_states);
  apply(f.n_sim, o.n_sim_states);
  apply(f.n_headings, o.n_headings);
  apply(f.n_omegas, o.n_omegas);
  apply(f.dt, o.dt);
  apply(f.max_time, o.max_time);
  apply(f.eta_tol, o.eta_tol);
  apply(f.residual_tol, o.residual_tol);
  apply(f.hji_tol, o.hji_tol);
  apply(f.gradient_tol, o.gradient_tol);
  apply(f.saddle_tol, o.saddle_tol);
  apply(f.sim_tol, o.sim_tol);
  apply(f.barrier_tol, o.barrier_tol);
  apply(f.eta_bias, o.eta_bias);
  return in;
}

TargetFrameState require_state(const Inputs& in, const CheckedParams& p) {
  if (!in.state) throw Error(ErrorCode::kInvalidConfig, "a state is required (--xD --xA --yA)");
  check_state(*in.state, p);
  return *in.state;
}

json params_json(const CheckedParams& p) {
  return {{"v_A", num(p.v_A())}, {"v_T", num(p.v_T())}, {"phi_T", num(p.phi_T())},
          {"L", num(p.L())}};
}

json state_json(const TargetFrameState& s) {
  return {{"xD_hat", num(s.xD_hat)}, {"xA_hat", num(s.xA_hat)}, {"yA_hat", num(s.yA_hat)}};
}

json evaluation_json(const TargetFrameState& s, const CheckedParams& p) {
  const Evaluation ev = game_value(s, p);
  json j;
  j["params"] = params_json(p);
  j["state"] = state_json(s);
  j["region"] = std::string(to_string(ev.region));
  j["attacker_win"] = is_attacker_win(ev.region);
  j["value"] = num(ev.value);
  if (ev.controls) {
    j["controls"] = {{"omega_D", num(ev.controls->omega_D)},
                     {"heading_A", vec(ev.controls->heading_A)},
                     {"phi_A", num(std::atan2(ev.controls->heading_A.y, ev.controls->heading_A.x))}};
  } else {
    j["controls"] = nullptr;
  }
  const Diagnostics& d = ev.diagnostics;
  json dj = json::object();
  if (d.eta) {
    dj["lambda"] = as_int(d.eta->lambda);
    dj["side"] = d.eta->side == Side::kAbove ? "above" : "below";
    dj["eta"] = num(d.eta->eta);
  }
  if (d.slope) dj["slope"] = num(*d.slope);
  if (d.aim_x) dj["aim_x"] = num(*d.aim_x);
  if (d.endpoint) {
    dj["endpoint_aiming"] = {{"xE_hat", num(d.endpoint->xE_hat)},
                             {"heading_hat", vec(d.endpoint->heading_hat)},
                             {"v_hat", num(d.endpoint->v_hat)},
                             {"heading_inertial", vec(d.endpoint->heading_inertial)},
                             {"intercept_time", num(intercept_time(s, p))}};
  }
  if (d.race) {
    dj["endpoint_race"] = {{"xE_hat", num(d.race->xE_hat)},
                           {"t_f2", num(d.race->t_f2)},
                           {"endpoint_at_tf2", vec(d.race->endpoint_at_tf2)},
                           {"r_A", num(d.race->r_A)}};
  }
  if (d.alignment) {
    dj["alignment"] = {{"y1", num(d.alignment->y1)},
                       {"y2", num(d.alignment->y2)},
                       {"align_point", vec(d.alignment->align_point)}};
  }
  j["diagnostics"] = dj;
  return j;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::kInvalidConfig, "cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

int cmd_eval(const Flags& f, std::ostream& out) {
  const Inputs in = resolve(f, true);
  const CheckedParams p = validate_params(in.params);
  const TargetFrameState s = require_state(in, p);
  Sink sink(f.output, out);
  sink.os() << evaluation_json(s, p).dump(2) << "\n";
  return kOk;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  const Inputs in = resolve(f, true);
  const CheckedParams p = validate_params(in.params);
  const TargetFrameState s0 = require_state(in, p);
  const Trajectory tr = simulate(s0, in.strategy, in.sim, p, in.origin);

  std::optional<Side> hint;
  std::vector<std::optional<double>> values;
  values.reserve(tr.samples.size());
  for (const auto& smp : tr.samples) {
    if (smp.state.yA_hat != 0.0) hint = resolve_side(smp.state.yA_hat);
    try {
      values.push_back(value_of(smp.state, p, hint).value);
    } catch (const Error&) {
      values.push_back(std::nullopt);
    }
  }

  json summary;
  summary["event"] = std::string(to_string(tr.event));
  summary["t_final"] = num(tr.t_final);
  summary["payoff"] = tr.payoff ? num(*tr.payoff) : json(nullptr);
  summary["region_at_start"] =
      tr.region_at_start ? json(std::string(to_string(*tr.region_at_start))) : json(nullptr);
  summary["value_at_start"] = values.empty() || !values.front() ? json(nullptr) : num(*values.front());
  summary["final_state"] = state_json(tr.final_state);
  summary["samples"] = tr.samples.size();

  Sink sink(f.output, out);
  if (in.format == "csv") {
    std::ostream& os = sink.os();
    os << "t,xD_hat,xA_hat,yA_hat,xA,yA,xD,yD,value\n";
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const auto& smp = tr.samples[i];
      os << format_number(smp.t) << ',' << format_number(smp.state.xD_hat) << ','
         << format_number(smp.state.xA_hat) << ',' << format_number(smp.state.yA_hat) << ','
         << format_number(smp.attacker.x) << ',' << format_number(smp.attacker.y) << ','
         << format_number(smp.defender.x) << ',' << format_number(smp.defender.y) << ','
         << (values[i] ? format_number(*values[i]) : "") << '\n';
    }
    if (!f.summary.empty()) {
      Sink ss(f.summary, err);
      ss.os() << summary.dump(2) << "\n";
    } else {
      err << summary.dump() << "\n";
    }
    return kOk;
  }
  json j;
  j["params"] = params_json(p);
  j["summary"] = summary;
  json arr = json::array();
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& smp = tr.samples[i];
    arr.push_back({{"t", num(smp.t)},
                   {"xD_hat", num(smp.state.xD_hat)},
                   {"xA_hat", num(smp.state.xA_hat)},
                   {"yA_hat", num(smp.state.yA_hat)},
                   {"xA", num(smp.attacker.x)},
                   {"yA", num(smp.attacker.y)},
                   {"xD", num(smp.defender.x)},
                   {"yD", num(smp.defender.y)},
                   {"value", values[i] ? num(*values[i]) : json(nullptr)}});
  }
  j["samples"] = arr;
  sink.os() << j.dump(1) << "\n";
  return kOk;
}

int cmd_barrier(const Flags& f, std::ostream& out) {
  const Inputs in = resolve(f, false);
  const CheckedParams p = validate_params(in.params);
  const double xD = in.barrier.xD_hat;
  if (!(xD >= 0.0 && xD <= p.L())) {
    throw Error(ErrorCode::kDefenderOffTarget, "barrier needs xD_hat in [0, L]");
  }
  const BarrierCurve c = barrier_curve(xD, p, in.barrier.samples);
  Sink sink(f.output, out);
  if (in.format == "csv") {
    std::ostream& os = sink.os();
    os << "xA_hat,yA_hat,tag,lambda,side,value\n";
    for (const auto& pt : c.points) {
      os << format_number(pt.pos.x) << ',' << format_number(pt.pos.y) << ','
         << to_string(pt.tag) << ',' << as_int(pt.lambda) << ','
         << (pt.side == Side::kAbove ? "above" : "below") << ','
         << format_number(value_of({xD, pt.pos.x, pt.pos.y}, p, pt.side).value) << '\n';
    }
    return kOk;
  }
  json j;
  j["params"] = params_json(p);
  j["xD_hat"] = num(xD);
  json arcs = json::array();
  for (const auto& a : c.arcs) {
    arcs.push_back({{"lambda", as_int(a.lambda)},
                    {"center", vec(a.center)},
                    {"radius", num(a.radius)},
                    {"t_f2", num(a.t_f2)}});
  }
  j["arcs"] = arcs;
  json gaps = json::array();
  for (double g : c.junction_gaps) gaps.push_back(num(g));
  j["junction_gaps"] = gaps;
  json pts = json::array();
  for (const auto& pt : c.points) {
    pts.push_back({{"xA_hat", num(pt.pos.x)},
                   {"yA_hat", num(pt.pos.y)},
                   {"tag", std::string(to_string(pt.tag))},
                   {"lambda", as_int(pt.lambda)},
                   {"side", pt.side == Side::kAbove ? "above" : "below"},
                   {"value", num(value_of({xD, pt.pos.x, pt.pos.y}, p, pt.side).value)}});
  }
  j["points"] = pts;
  sink.os() << j.dump(1) << "\n";
  return kOk;
}

double grid_coord(double lo, double hi, int n, int i) {
  return n == 1 ? lo : lo + i * ((hi - lo) / (n - 1));
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  const Inputs in = resolve(f, false);
  const CheckedParams p = validate_params(in.params);
  const SweepSpec& g = in.sweep;
  if (g.nx < 1 || g.ny < 1 ||
      !std::isfinite(g.x_min) || !std::isfinite(g.x_max) || !std::isfinite(g.y_min) ||
      !std::isfinite(g.y_max) || g.x_min > g.x_max || g.y_min > g.y_max) {
    throw Error(ErrorCode::kInvalidConfig, "sweep grid needs nx, ny >= 1 and finite ordered bounds");
  }
  if (!(g.xD_hat >= 0.0 && g.xD_hat <= p.L())) {
    throw Error(ErrorCode::kDefenderOffTarget, "sweep needs xD_hat in [0, L]");
  }

  struct Cell {
    double x, y;
    std::optional<RegionValue> rv;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(g.nx) * g.ny);
  parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t j) {
    const double y = grid_coord(g.y_min, g.y_max, g.ny, static_cast<int>(j));
    for (int i = 0; i < g.nx; ++i) {
      Cell& c = cells[j * g.nx + i];
      c.x = grid_coord(g.x_min, g.x_max, g.nx, i);
      c.y = y;
      try {
        c.rv = value_of({g.xD_hat, c.x, c.y}, p);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSideAmbiguous && e.code() != ErrorCode::kUndefinedDirection &&
            e.code() != ErrorCode::kCoincidentWithEndpoint) {
          throw;
        }
      }
    }
  });

  std::size_t wins = 0;
  for (const auto& c : cells) wins += c.rv && is_attacker_win(c.rv->region);

  Sink sink(f.output, out);
  if (in.format == "csv") {
    std::ostream& os = sink.os();
    os << "xA_hat,yA_hat,region,value\n";
    for (const auto& c : cells) {
      os << format_number(c.x) << ',' << format_number(c.y) << ','
         << (c.rv ? to_string(c.rv->region) : "undefined") << ','
         << (c.rv ? format_number(c.rv->value) : "") << '\n';
    }
    return kOk;
  }
  json j;
  j["params"] = params_json(p);
  j["xD_hat"] = num(g.xD_hat);
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["attacker_win_cells"] = wins;
  j["attacker_win_fraction"] = num(static_cast<double>(wins) / cells.size());
  json arr = json::array();
  for (const auto& c : cells) {
    arr.push_back({{"xA_hat", num(c.x)},
                   {"yA_hat", num(c.y)},
                   {"region", c.rv ? std::string(to_string(c.rv->region)) : "undefined"},
                   {"value", c.rv ? num(c.rv->value) : json(nullptr)}});
  }
  j["cells"] = arr;
  sink.os() << j.dump(1) << "\n";
  return kOk;
}

int cmd_check(const Flags& f, std::ostream& out) {
  const Inputs in = resolve(f, false);
  const CheckedParams p = validate_params(in.params);
  const CheckReport rep = run_checks(p, in.check);
  json j;
  j["params"] = params_json(p);
  j["passed"] = rep.passed();
  json arr = json::array();
  for (const auto& r : rep.results) {
    arr.push_back({{"name", r.name},
                   {"measured", std::isfinite(r.measured) ? json(format_number(r.measured)) : json("inf")},
                   {"bound", format_number(r.bound)},
                   {"passed", r.passed}});
  }
  j["checks"] = arr;
  Sink sink(f.output, out);
  sink.os() << j.dump(2) << "\n";
  return rep.passed() ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for the translating-line target-guarding game", "lineguard"};
  app.require_subcommand(1);
  Flags f;

  auto* eval = app.add_subcommand("eval", "region, value, controls and geometry at one state");
  add_common(eval, f);
  add_state(eval, f);

  auto* sim = app.add_subcommand("simulate", "integrate a trajectory");
  add_common(sim, f);
  add_state(sim, f);
  add_format(sim, f);
  sim->add_option("--attacker", f.attacker, "equilibrium, naive or constant")
      ->check(CLI::IsMember({"equilibrium", "naive", "constant"}));
  sim->add_option("--heading", f.heading, "constant attacker heading, radians");
  sim->add_option("--defender", f.defender, "equilibrium, idle or constant")
      ->check(CLI::IsMember({"equilibrium", "idle", "constant"}));
  sim->add_option("--omega", f.omega, "constant defender speed in [-1, 1]");
  sim->add_option("--dt", f.dt, "step size");
  sim->add_option("--max-time", f.max_time, "time cap");
  sim->add_option("--eps-event", f.eps_event, "event tolerance");
  sim->add_option("--record-every", f.record_every, "keep every n-th step");
  sim->add_option("--summary", f.summary, "summary file for csv output (default stderr)");

  auto* bar = app.add_subcommand("barrier", "sampled barrier curve at fixed xD_hat");
  add_common(bar, f);
  add_format(bar, f);
  bar->add_option("--xD", f.xD, "defender xD_hat");
  bar->add_option("--samples", f.samples, "points per ray and per arc");

  auto* sw = app.add_subcommand("sweep", "region and value on an inclusive grid");
  add_common(sw, f);
  add_format(sw, f);
  sw->add_option("--xD", f.xD, "defender xD_hat");
  sw->add_option("--x-min", f.x_min);
  sw->add_option("--x-max", f.x_max);
  sw->add_option("--nx", f.nx);
  sw->add_option("--y-min", f.y_min);
  sw->add_option("--y-max", f.y_max);
  sw->add_option("--ny", f.ny);

  auto* chk = app.add_subcommand("check", "oracle, saddle, HJI and consistency suites");
  add_common(chk, f);
  chk->add_option("--seed", f.seed, "RNG seed for sampled states and parameters");
  chk->add_option("--n-params", f.n_params, "random parameter tuples for the eta oracle");
  chk->add_option("--n-hji", f.n_hji, "S1d states for the HJI checks");
  chk->add_option("--n-saddle", f.n_saddle, "states per region for the saddle checks");
  chk->add_option("--n-sim", f.n_sim, "states per region for simulation consistency");
  chk->add_option("--n-headings", f.n_headings, "constant headings tried by the attacker best response");
  chk->add_option("--n-omegas", f.n_omegas, "constant speeds tried by the defender best response");
  chk->add_option("--dt", f.dt, "step size for check simulations");
  chk->add_option("--max-time", f.max_time, "time cap for check simulations");
  chk->add_option("--eta-tol", f.eta_tol, "eta vs bisection, relative to max(1, |eta|)");
  chk->add_option("--residual-tol", f.residual_tol, "terminal Hamiltonian residual, relative to max(1, |eta|)");
  chk->add_option("--hji-tol", f.hji_tol, "HJI residual");
  chk->add_option("--gradient-tol", f.gradient_tol, "value gradient vs central differences");
  chk->add_option("--saddle-tol", f.saddle_tol, "allowed best-response gain");
  chk->add_option("--sim-tol", f.sim_tol, "simulated payoff vs value");
  chk->add_option("--barrier-tol", f.barrier_tol, "|V| on barrier points and junction gaps");
  chk->add_option("--inject-eta-bias", f.eta_bias)->group("");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*eval) return cmd_eval(f, out);
    if (*sim) return cmd_simulate(f, out, err);
    if (*bar) return cmd_barrier(f, out);
    if (*sw) return cmd_sweep(f, out);
    if (*chk) return cmd_check(f, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace lineguard::cli
