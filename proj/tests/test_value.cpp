#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "lineguard/error.hpp"
#include "lineguard/oracle.hpp"
#include "lineguard/value.hpp"

using namespace lineguard;
using lineguard::testing::reference_params;
using lineguard::testing::stationary_params;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("value_attacker_inf") {
  const CheckedParams p = reference_params();
  CHECK(near(value_attacker_inf({0.35, 0.25}, p), 0.209651624, 1e-8));
  CHECK(value_attacker_inf({0.3, 0.0}, p) == doctest::Approx(0.3));
  CHECK(value_attacker_inf({-0.3, 0.0}, p) == doctest::Approx(0.3));
  const double m = slope(attacker_heading_inf(p, Direction::kPositive, Side::kAbove), 1.0, p);
  CHECK(std::abs(value_attacker_inf({0.2, 0.2 * m}, p)) < 1e-15);
  CHECK_THROWS_AS(value_attacker_inf({0.0, 0.2}, p), Error);
}

TEST_CASE("value_attacker_finite") {
  const CheckedParams p = reference_params();
  CHECK(near(value_attacker_finite({0.4, 0.75, 0.25}, p), 0.203314441, 1e-8));
  CHECK(near(value_attacker_finite({0.4, 0.75, 0.25}, p), 0.2, 0.005));
  CHECK(near(value_attacker_finite({0.4, 0.85, 0.48}, p), 0.037341383, 1e-8));
  const TargetFrameState s1a{0.4, 0.8, 0.05};
  CHECK(value_attacker_finite(s1a, p) == value_attacker_inf(to_relative(s1a), p));
  CHECK_THROWS_AS(value_attacker_finite({0.4, 0.05, 0.5}, p), Error);
}

TEST_CASE("S0 value on the target line uses the travel time") {
  const CheckedParams p = reference_params();
  // Off-axis states approaching y = 0 converge to the on-axis value.
  const double on = value_of({0.4, 1.1, 0.0}, p).value;
  const double off = value_of({0.4, 1.1, 1e-9}, p).value;
  CHECK(value_of({0.4, 1.1, 0.0}, p).region == Region::kS0);
  CHECK(near(on, off, 1e-8));
  // Slope and travel-time forms agree off the axis.
  for (double y : {0.1, 0.25, -0.2}) {
    const TargetFrameState s{0.4, 1.2, y};
    if (classify(s, p) != Region::kS0) continue;
    const EndpointAiming e = endpoint_aiming(s, p);
    const double dXdt = p.v_A() * e.heading_inertial.x - p.target_velocity().x - 1.0;
    CHECK(near(value_of(s, p).value, 0.8 + dXdt * intercept_time(s, p), 1e-12));
  }
}

TEST_CASE("value_defender_inf") {
  const CheckedParams p = reference_params();
  CHECK(near(value_defender_inf({-0.35, 0.5}, p), -0.112694194, 1e-8));
  CHECK(value_defender_inf({0.0, 0.3}, p) == -0.3);
  CHECK(value_defender_inf({0.0, -0.3}, p) == -0.3);
  const double m = slope(attacker_heading_inf(p, Direction::kNegative, Side::kAbove), -1.0, p);
  CHECK(std::abs(value_defender_inf({-0.2, -0.2 * m}, p)) < 1e-15);
}

TEST_CASE("value_defender_finite") {
  const CheckedParams p = reference_params();
  CHECK(near(value_defender_finite({0.4, 0.05, 0.5}, p), -0.165576496, 1e-8));
  CHECK(near(value_defender_finite({0.4, 0.05, 0.5}, p), -0.167, 0.005));
  CHECK(near(value_defender_finite({0.4, -0.3, 0.35}, p), -0.102625897, 1e-8));
  CHECK_THROWS_AS(value_defender_finite({0.4, 0.75, 0.25}, p), Error);

  // In S2 the attacker ends x-aligned with the defender.
  std::mt19937_64 rng(4);
  const auto states = sample_region_states(p, Region::kS2, 200, 1e-3, rng);
  for (const auto& s : states) {
    const AlignmentGeometry g = alignment_geometry(s, p);
    const double Xf = g.align_point.x - g.endpoint_at_tf2.x;
    CHECK(std::abs(Xf) < 1e-10);
    CHECK(near(value_of(s, p).value, -std::abs(g.align_point.y - g.endpoint_at_tf2.y), 1e-10));
  }
}

TEST_CASE("game_value packages region, value and controls") {
  const CheckedParams p = reference_params();
  const Evaluation a = game_value({0.4, 0.75, 0.25}, p);
  CHECK(a.region == Region::kS0);
  CHECK(near(a.value, 0.2033, 1e-4));
  REQUIRE(a.controls);
  CHECK(a.controls->omega_D == 1.0);
  CHECK(a.diagnostics.endpoint);
  CHECK(a.diagnostics.eta);
  const Evaluation b = game_value({0.4, 0.05, 0.5}, p);
  CHECK(b.region == Region::kS2);
  CHECK(near(b.value, -0.1656, 1e-4));
  CHECK(b.diagnostics.alignment);
  CHECK(b.controls->omega_D == -1.0);
  // Terminal state on the segment has no heading without a side.
  const Evaluation c = game_value({0.4, 0.6, 0.0}, p);
  CHECK(c.region == Region::kS1a);
  CHECK(!c.controls);
}

TEST_CASE("value sign matches the region on random states") {
  const CheckedParams p = reference_params();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::uniform_real_distribution<double> ua(-1.0, 2.0);
  std::uniform_real_distribution<double> uy(-1.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const TargetFrameState s{ud(rng), ua(rng), uy(rng)};
    const RegionValue rv = value_of(s, p);
    if (std::abs(rv.value) < 1e-6) continue;
    CHECK((rv.value > 0.0) == is_attacker_win(rv.region));
    ++checked;
  }
  CHECK(checked > 9900);
}

TEST_CASE("attacker value gradient is sgn(X) in xA_hat and -sgn(X) in xD_hat") {
  const CheckedParams p = reference_params();
  std::mt19937_64 rng(2);
  const double h = 1e-6;
  for (const auto& s : sample_region_states(p, Region::kS1a, 100, 1e-3, rng)) {
    const double lam = s.xA_hat > s.xD_hat ? 1.0 : -1.0;
    auto va = [&](double dD, double dA) {
      return value_attacker_inf({s.xA_hat + dA - s.xD_hat - dD, s.yA_hat}, p);
    };
    CHECK(near((va(0, h) - va(0, -h)) / (2 * h), lam, 1e-6));
    CHECK(near((va(h, 0) - va(-h, 0)) / (2 * h), -lam, 1e-6));
  }
}

TEST_CASE("attacker value falls as the attacker moves away from the line") {
  const CheckedParams p = reference_params();
  for (double xA : {0.6, 0.8, 0.9}) {
    double prev = INFINITY;
    for (int k = 1; k < 40; ++k) {
      const double y = 0.005 * k;
      const RegionValue rv = value_of({0.4, xA, y}, p);
      if (!is_attacker_win(rv.region) || rv.region != Region::kS1a) break;
      CHECK(rv.value < prev);
      prev = rv.value;
    }
  }
}

TEST_CASE("HJI residual vanishes in S1d and detects a wrong slope") {
  std::mt19937_64 rng(12);
  for (const CheckedParams& p : {reference_params(), stationary_params()}) {
    const auto states = sample_region_states(p, Region::kS1d, 300, 1e-6, rng);
    for (const auto& s : states) {
      CHECK(std::abs(hji_residual(s, p)) < 1e-9);

      const auto g = value_defender_inf_gradient(s, p);
      const double h = 1e-6;
      for (int k = 0; k < 3; ++k) {
        TargetFrameState a = s;
        TargetFrameState b = s;
        (k == 0 ? a.xD_hat : k == 1 ? a.xA_hat : a.yA_hat) += h;
        (k == 0 ? b.xD_hat : k == 1 ? b.xA_hat : b.yA_hat) -= h;
        const double fd =
            (value_defender_inf(to_relative(a), p) - value_defender_inf(to_relative(b), p)) /
            (2 * h);
        CHECK(std::abs(fd - g[k]) < 1e-6);
      }

      // The equilibrium controls attain the min-max.
      const Direction lam = *direction_of(s.xA_hat - s.xD_hat);
      const Side side = resolve_side(s.yA_hat);
      const double m = slope(attacker_heading_inf(p, lam, side), as_int(lam), p);
      const Controls eq{static_cast<double>(as_int(lam)), attacker_heading_inf(p, lam, side)};
      CHECK(std::abs(hji_hamiltonian(s, p, m, eq)) < 1e-9);
      CHECK(std::abs(hji_residual_for_slope(s, p, m * (1.0 + 1e-3))) > 1e-6);
    }
  }
}

TEST_CASE("barrier arcs for the reference game") {
  const CheckedParams p = reference_params();
  const BarrierCurve c = barrier_curve(0.4, p, 50);
  REQUIRE(c.arcs.size() == 2);
  const BarrierArc& right = c.arcs[0];
  const BarrierArc& left = c.arcs[1];
  CHECK(right.lambda == Direction::kPositive);
  CHECK(near(right.t_f2, 0.6, 1e-15));
  CHECK(near(right.center.x, 0.94, 1e-12));
  CHECK(near(right.center.y, 0.103923048, 1e-8));
  CHECK(near(right.radius, 0.42, 1e-12));
  CHECK(near(left.center.x, -0.04, 1e-12));
  CHECK(near(left.center.y, 0.069282032, 1e-8));
  CHECK(near(left.radius, 0.28, 1e-12));
  for (double gap : c.junction_gaps) CHECK(gap < 1e-6);
}

TEST_CASE("barrier points lie on the zero level set") {
  const CheckedParams p = reference_params();
  for (int i = 0; i <= 5; ++i) {
    const double xD = 0.2 * i;
    const BarrierCurve c = barrier_curve(xD, p, 100);
    CHECK(!c.points.empty());
    double prev = 0.0;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      const BarrierPoint& pt = c.points[k];
      const double v = value_of({xD, pt.pos.x, pt.pos.y}, p, pt.side).value;
      CHECK(std::abs(v) < 1e-6);
      if (k > 0) CHECK(std::abs(std::abs(v) - prev) < 1e-6);
      prev = std::abs(v);
    }
  }
  // Defender on an endpoint: only the other branch exists.
  CHECK(barrier_curve(0.0, p, 10).arcs.size() == 1);
  CHECK_THROWS_AS(barrier_curve(1.5, p, 10), Error);
}

TEST_CASE("refinement lands on the analytic barrier") {
  const CheckedParams p = reference_params();
  const BarrierCurve c = barrier_curve(0.4, p, 20);
  int refined = 0;
  for (const auto& pt : c.points) {
    if (norm(pt.pos - Vec2{0.4, 0.0}) < 1e-2 || std::abs(pt.pos.y) < 1e-2) continue;
    const auto r = refine_barrier_point(pt, 0.4, p);
    REQUIRE(r);
    CHECK(norm(*r - pt.pos) < 1e-9);
    ++refined;
  }
  CHECK(refined > 50);
}

TEST_CASE("stationary target barrier is symmetric in yA_hat") {
  const CheckedParams p = stationary_params();
  const BarrierCurve c = barrier_curve(0.4, p, 50);
  for (const auto& pt : c.points) {
    const TargetFrameState mirror{0.4, pt.pos.x, -pt.pos.y};
    CHECK(std::abs(value_of(mirror, p, pt.side == Side::kAbove ? Side::kBelow : Side::kAbove).value) <
          1e-10);
  }
}
