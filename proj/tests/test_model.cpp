#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "lineguard/error.hpp"
#include "lineguard/model.hpp"

using namespace lineguard;
using lineguard::testing::reference_params;

namespace {

ErrorCode code_of(const GameParams& g) {
  try {
    validate_params(g);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation error");
  return ErrorCode::kInvalidConfig;
}

}  // namespace

TEST_CASE("validate_params accepts the reference game") {
  const CheckedParams p = reference_params();
  CHECK(p.v_A() == 0.7);
  CHECK(p.v_T() == 0.2);
  CHECK(p.L() == 1.0);
  CHECK(p.target_dir().x == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("validate_params names the violated assumption") {
  CHECK(code_of({0.1, 0.2, 0.0, 1.0, {}}) == ErrorCode::kAttackerNotFasterThanTarget);
  CHECK(code_of({0.95, 0.2, 0.0, 1.0, {}}) == ErrorCode::kDefenderCannotOutrun);
  CHECK(code_of({0.0, 0.0, 0.0, 1.0, {}}) == ErrorCode::kNonPositiveAttackerSpeed);
  CHECK(code_of({0.5, 0.1, 0.0, 0.0, {}}) == ErrorCode::kNonPositiveLength);
  CHECK(code_of({0.5, -0.1, 0.0, 1.0, {}}) == ErrorCode::kNegativeTargetSpeed);
  CHECK(code_of({NAN, 0.1, 0.0, 1.0, {}}) == ErrorCode::kNonFiniteParameter);
  // Equality is rejected for both assumptions.
  CHECK(code_of({0.2, 0.2, 1.0, 1.0, {}}) == ErrorCode::kAttackerNotFasterThanTarget);
  CHECK(code_of({0.8, 0.2, 0.0, 1.0, {}}) == ErrorCode::kDefenderCannotOutrun);
  CHECK(to_string(ErrorCode::kDefenderCannotOutrun) == "A2");
  CHECK(to_string(ErrorCode::kAttackerNotFasterThanTarget) == "A1");
}

TEST_CASE("validate_params accepts exactly the admissible set") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  std::uniform_real_distribution<double> ang(-4.0, 4.0);
  int accepted = 0;
  for (int i = 0; i < 20000; ++i) {
    const GameParams g{u(rng), u(rng), ang(rng), u(rng), {}};
    const bool expect = g.v_A > 0.0 && g.v_T >= 0.0 && g.L > 0.0 && g.v_A > g.v_T &&
                        g.v_A < 1.0 - std::abs(g.v_T * std::cos(g.phi_T));
    bool got = true;
    try {
      validate_params(g);
    } catch (const Error&) {
      got = false;
    }
    CHECK(got == expect);
    accepted += got;
  }
  CHECK(accepted > 100);
}

TEST_CASE("to_relative") {
  const RelativeState a = to_relative({0.4, 0.75, 0.25});
  CHECK(a.X == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(a.Y == 0.25);
  const RelativeState b = to_relative({0.0, 0.0, 0.0});
  CHECK(b.X == 0.0);
  CHECK(b.Y == 0.0);
  const RelativeState c = to_relative({0.4, 0.05, 0.5});
  CHECK(c.X == doctest::Approx(-0.35).epsilon(1e-15));
  CHECK(c.Y == 0.5);
}

TEST_CASE("frame_transform") {
  const InertialPose at0{0.0, {0.0, 0.0}};
  const Vec2 q = frame_transform({0.5, 0.5}, at0, FrameDirection::kToTarget);
  CHECK(q.x == 0.5);
  CHECK(q.y == 0.5);

  const InertialPose moved{0.4, {-0.08, 0.1386}};
  const Vec2 r = frame_transform({0.0, 0.0}, moved, FrameDirection::kToTarget);
  CHECK(r.x == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(r.y == doctest::Approx(-0.1386).epsilon(1e-15));

  const CheckedParams p = reference_params();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 pos{u(rng), u(rng)};
    const InertialPose pose = pose_at(p, {u(rng), u(rng)}, std::abs(u(rng)));
    const Vec2 back = frame_transform(frame_transform(pos, pose, FrameDirection::kToTarget), pose,
                                      FrameDirection::kToInertial);
    CHECK(std::abs(back.x - pos.x) < 1e-12);
    CHECK(std::abs(back.y - pos.y) < 1e-12);
  }
}

TEST_CASE("pose_at moves the origin with the target velocity") {
  const CheckedParams p = reference_params();
  const InertialPose pose = pose_at(p, {1.0, 2.0}, 0.4);
  CHECK(pose.target_origin.x == doctest::Approx(1.0 - 0.04));
  CHECK(pose.target_origin.y == doctest::Approx(2.0 + 0.4 * 0.2 * std::sqrt(3.0) / 2.0));
}

TEST_CASE("state_rate matches the target-frame kinematics") {
  const CheckedParams p = reference_params();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double phi = 4.0 * u(rng);
    const Controls c{u(rng), {std::cos(phi), std::sin(phi)}};
    const TargetFrameState r = state_rate({0.5, u(rng), u(rng)}, c, p);
    CHECK(r.xD_hat == c.omega_D);
    CHECK(r.xA_hat == doctest::Approx(0.7 * std::cos(phi) + 0.1).epsilon(1e-14));
    CHECK(r.yA_hat ==
          doctest::Approx(0.7 * std::sin(phi) - 0.2 * std::sin(2.0 * M_PI / 3.0)).epsilon(1e-14));
  }
}

TEST_CASE("side resolution and state checks") {
  CHECK(resolve_side(0.3) == Side::kAbove);
  CHECK(resolve_side(-0.3) == Side::kBelow);
  CHECK(resolve_side(0.0, Side::kAbove) == Side::kAbove);
  CHECK_THROWS_AS(resolve_side(0.0), Error);
  const CheckedParams p = reference_params();
  CHECK_THROWS_AS(check_state({1.5, 0.0, 0.1}, p), Error);
  CHECK_NOTHROW(check_state({1.0, 0.0, 0.1}, p));
}
