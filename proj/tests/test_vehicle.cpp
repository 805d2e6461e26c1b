#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "navguard/errors.hpp"
#include "navguard/random.hpp"
#include "navguard/vehicle.hpp"

using namespace navguard;

namespace {

constexpr double kPi = 3.141592653589793238462643383280;

VehicleState random_state(RandomStream& rng) {
  VehicleState s;
  s.x = 10.0 * rng.normal();
  s.y = 10.0 * rng.normal();
  s.theta = 2.5 * (rng.uniform() * 2.0 - 1.0);  // clear of the wrap cut
  s.vx = 5.0 * rng.normal();
  s.vy = 2.0 * rng.normal();
  s.theta_dot = 1.5 * (rng.uniform() * 2.0 - 1.0);
  s.ax = rng.normal();
  s.ay = rng.normal();
  s.b_theta_dot = 0.1 * rng.normal();
  s.b_ax = 0.1 * rng.normal();
  s.b_ay = 0.1 * rng.normal();
  return s;
}

// Central finite differences of propagate, the independent oracle for the
// analytic Jacobian.
Mat11 finite_difference_jacobian(const VehicleState& state, double T,
                                 double h) {
  Mat11 J;
  const Vec11 base = state.to_vector();
  for (int j = 0; j < kStateDim; ++j) {
    Vec11 plus = base;
    Vec11 minus = base;
    plus(j) += h;
    minus(j) -= h;
    const Vec11 fp = propagate(VehicleState::from_vector(plus), T).to_vector();
    const Vec11 fm =
        propagate(VehicleState::from_vector(minus), T).to_vector();
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

}  // namespace

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // half-open interval
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    CHECK(w > -kPi - 1e-15);
    CHECK(w <= kPi + 1e-15);
    CHECK(std::abs(std::sin(w) - std::sin(a)) < 1e-12);
    CHECK(std::abs(std::cos(w) - std::cos(a)) < 1e-12);
  }
}

TEST_CASE("propagate holds the all-zero state fixed") {
  const VehicleState next = propagate(VehicleState{}, 0.1);
  CHECK(next.to_vector().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("propagate advances x by T vx at zero heading") {
  VehicleState s;
  s.vx = 10.0;
  const VehicleState next = propagate(s, 0.1);
  CHECK(next.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(next.y == 0.0);
  CHECK(next.theta == 0.0);
  CHECK(next.vx == 10.0);
  CHECK(next.vy == 0.0);
}

TEST_CASE("propagate advances y at heading pi/2") {
  VehicleState s;
  s.theta = kPi / 2.0;
  s.vx = 10.0;
  const VehicleState next = propagate(s, 0.1);
  CHECK(next.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(next.x) <= 1e-12);
}

TEST_CASE("propagate wraps yaw and rejects non-finite states") {
  VehicleState s;
  s.theta = kPi - 0.01;
  s.theta_dot = 1.0;
  const VehicleState next = propagate(s, 0.1);
  CHECK(next.theta == doctest::Approx(-kPi + 0.09).epsilon(1e-9));

  VehicleState bad;
  bad.vx = std::numeric_limits<double>::infinity();
  try {
    propagate(bad, 0.1);
    FAIL("expected NonFiniteState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteState);
  }
}

TEST_CASE("state_jacobian at the origin has the integrator couplings") {
  const Mat11 J = state_jacobian(VehicleState{}, 0.1);
  Mat11 expected = Mat11::Identity();
  expected(kIdxX, kIdxVx) = 0.1;
  expected(kIdxY, kIdxVy) = 0.1;
  expected(kIdxTheta, kIdxThetaDot) = 0.1;
  expected(kIdxVx, kIdxAx) = 0.1;
  expected(kIdxVy, kIdxAy) = 0.1;
  CHECK((J - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state_jacobian velocity entries follow the heading") {
  RandomStream rng(5);
  for (int i = 0; i < 10; ++i) {
    const VehicleState s = random_state(rng);
    const Mat11 J = state_jacobian(s, 0.1);
    CHECK(J(kIdxX, kIdxVx) == doctest::Approx(0.1 * std::cos(s.theta)));
    CHECK(J(kIdxX, kIdxVy) == doctest::Approx(-0.1 * std::sin(s.theta)));
  }
}

TEST_CASE("state_jacobian matches finite differences at random states") {
  RandomStream rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const VehicleState s = random_state(rng);
    const Mat11 J = state_jacobian(s, 0.1);
    const Mat11 J_fd = finite_difference_jacobian(s, 0.1, 1e-6);
    for (int i = 0; i < kStateDim; ++i) {
      for (int j = 0; j < kStateDim; ++j) {
        const double err =
            std::abs(J_fd(i, j) - J(i, j)) / (1.0 + std::abs(J(i, j)));
        CHECK(err < 1e-6);
      }
    }
  }
}

TEST_CASE("straight-line coasting covers vx T k exactly") {
  VehicleState s;
  s.vx = 3.0;
  const double T = 0.1;
  for (int k = 0; k < 200; ++k) {
    s = propagate(s, T);
  }
  CHECK(std::abs(s.x - 3.0 * T * 200) < 1e-9);
  CHECK(std::abs(s.y) < 1e-12);
}

TEST_CASE("heading offset rotates the displacement exactly") {
  RandomStream rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    VehicleState s = random_state(rng);
    const double phi = rng.uniform() * 2.0 - 1.0;
    VehicleState rotated = s;
    rotated.theta = wrap_angle(s.theta + phi);

    const VehicleState a = propagate(s, 0.1);
    const VehicleState b = propagate(rotated, 0.1);
    const double dxa = a.x - s.x;
    const double dya = a.y - s.y;
    const double dxb = b.x - rotated.x;
    const double dyb = b.y - rotated.y;
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    CHECK(std::abs(dxb - (c * dxa - sn * dya)) < 1e-9);
    CHECK(std::abs(dyb - (sn * dxa + c * dya)) < 1e-9);
  }
}

TEST_CASE("measurement_map passes positions through and adds biases") {
  CHECK(measurement_map(VehicleState{}).cwiseAbs().maxCoeff() == 0.0);

  VehicleState s;
  s.theta_dot = 0.2;
  s.b_theta_dot = 0.05;
  CHECK(measurement_map(s)(kChYthetaDot) == doctest::Approx(0.25));

  VehicleState p;
  p.x = 3.0;
  p.y = -4.0;
  const Vec6 y = measurement_map(p);
  CHECK(y(kChYx) == 3.0);
  CHECK(y(kChYy) == -4.0);
  CHECK(y.tail(4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("measurement_jacobian has the documented sparsity") {
  const Mat6x11& H = measurement_jacobian();
  Eigen::Matrix<double, 1, 11> e1 = Eigen::Matrix<double, 1, 11>::Zero();
  e1(kIdxX) = 1.0;
  CHECK((H.row(kChYx) - e1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(H(kChYthetaDot, kIdxThetaDot) == 1.0);
  CHECK(H(kChYthetaDot, kIdxBThetaDot) == 1.0);
  CHECK(H.row(kChYthetaDot).sum() == 2.0);
  CHECK(H.cwiseAbs().sum() == 9.0);  // nine unit entries in total
}

TEST_CASE("measurement model is exactly linear") {
  RandomStream rng(31);
  const Mat6x11& H = measurement_jacobian();
  for (int trial = 0; trial < 50; ++trial) {
    const VehicleState s = random_state(rng);
    const Vec6 direct = measurement_map(s);
    const Vec6 lifted = H * s.to_vector();
    CHECK((direct - lifted).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("follower advances on capture and stops when exhausted") {
  WaypointFollower follower({Waypoint{0.0, 0.0, 1.0}}, ControllerConfig{});
  VehicleState at_center;
  const VelocityCommand cmd = follower.step(at_center);
  CHECK(follower.active_index() == 1);
  CHECK(follower.finished());
  CHECK(cmd.v_forward <= 0.5 * 1.0);  // k_v * capture_radius
  CHECK(cmd.v_forward == 0.0);
  CHECK(cmd.yaw_rate == 0.0);

  const VelocityCommand after = follower.step(at_center);
  CHECK(after.v_forward == 0.0);
  CHECK(after.yaw_rate == 0.0);
}

TEST_CASE("follower commands a left turn toward a target due north") {
  WaypointFollower follower({Waypoint{0.0, 100.0, 1.0}}, ControllerConfig{});
  VehicleState s;  // at origin, heading east
  const VelocityCommand cmd = follower.step(s);
  CHECK(cmd.yaw_rate > 0.0);
  CHECK(cmd.v_forward > 0.0);
}

TEST_CASE("follower clamps commands to the configured limits") {
  ControllerConfig cfg;
  WaypointFollower follower({Waypoint{-1000.0, 0.0, 1.0}}, cfg);
  VehicleState s;  // target directly behind
  const VelocityCommand cmd = follower.step(s);
  CHECK(std::abs(cmd.yaw_rate) <= cfg.yaw_rate_max);
  CHECK(cmd.v_forward <= cfg.v_max);
}

TEST_CASE("empty routes are rejected") {
  CHECK_THROWS_AS(WaypointFollower({}, ControllerConfig{}), Error);
  try {
    WaypointFollower follower({}, ControllerConfig{});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyRoute);
  }
}

TEST_CASE("closed loop reaches the diagonal waypoint in bounded time") {
  // Noise-free plant driven by the follower, the same actuation rule the
  // scenario harness uses.
  ControllerConfig cfg;
  WaypointFollower follower({Waypoint{280.0, 280.0, 2.0}}, cfg);
  VehicleState truth;
  const double T = 0.1;
  bool reached = false;
  for (int k = 1; k < 600; ++k) {
    const VelocityCommand cmd = follower.step(truth);
    truth.theta_dot = cmd.yaw_rate;
    truth.ax = std::clamp(1.0 * (cmd.v_forward - truth.vx), -3.0, 3.0);
    truth.ay = 0.0;
    truth = propagate(truth, T);
    if (follower.finished()) {
      reached = true;
      break;
    }
  }
  CHECK(reached);
}
