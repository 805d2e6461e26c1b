#include "navguard/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "navguard/errors.hpp"

namespace navguard {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
}

Vec11 VehicleState::to_vector() const {
  Vec11 v;
  v << x, y, theta, vx, vy, theta_dot, ax, ay, b_theta_dot, b_ax, b_ay;
  return v;
}

VehicleState VehicleState::from_vector(const Vec11& v) {
  VehicleState s;
  s.x = v(kIdxX);
  s.y = v(kIdxY);
  s.theta = v(kIdxTheta);
  s.vx = v(kIdxVx);
  s.vy = v(kIdxVy);
  s.theta_dot = v(kIdxThetaDot);
  s.ax = v(kIdxAx);
  s.ay = v(kIdxAy);
  s.b_theta_dot = v(kIdxBThetaDot);
  s.b_ax = v(kIdxBAx);
  s.b_ay = v(kIdxBAy);
  return s;
}

double wrap_angle(double a) noexcept {
  if (a > -kPi && a <= kPi) {
    return a;  // already in range, no round-trip error
  }
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) {
    a += 2.0 * kPi;
  }
  return a - kPi;
}

VehicleState propagate(const VehicleState& state, double T) {
  if (!(T > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "sample period T must be positive");
  }
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  VehicleState out = state;
  out.x = state.x + T * (state.vx * c - state.vy * s);
  out.y = state.y + T * (state.vx * s + state.vy * c);
  out.theta = wrap_angle(state.theta + T * state.theta_dot);
  out.vx = state.vx + T * state.ax;
  out.vy = state.vy + T * state.ay;
  const Vec11 v = out.to_vector();
  for (int i = 0; i < kStateDim; ++i) {
    if (!std::isfinite(v(i))) {
      throw Error(ErrorCode::NonFiniteState,
                  "propagate produced a non-finite component at state index " +
                      std::to_string(i));
    }
  }
  return out;
}

Mat11 state_jacobian(const VehicleState& state, double T) {
  if (!(T > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "sample period T must be positive");
  }
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  Mat11 J = Mat11::Identity();
  J(kIdxX, kIdxTheta) = T * (-state.vx * s - state.vy * c);
  J(kIdxX, kIdxVx) = T * c;
  J(kIdxX, kIdxVy) = -T * s;
  J(kIdxY, kIdxTheta) = T * (state.vx * c - state.vy * s);
  J(kIdxY, kIdxVx) = T * s;
  J(kIdxY, kIdxVy) = T * c;
  J(kIdxTheta, kIdxThetaDot) = T;
  J(kIdxVx, kIdxAx) = T;
  J(kIdxVy, kIdxAy) = T;
  return J;
}

Vec6 measurement_map(const VehicleState& state) {
  Vec6 y;
  y(kChYx) = state.x;
  y(kChYy) = state.y;
  y(kChYtheta) = state.theta;
  y(kChYthetaDot) = state.theta_dot + state.b_theta_dot;
  y(kChYax) = state.ax + state.b_ax;
  y(kChYay) = state.ay + state.b_ay;
  return y;
}

const Mat6x11& measurement_jacobian() {
  static const Mat6x11 H = [] {
    Mat6x11 h = Mat6x11::Zero();
    h(kChYx, kIdxX) = 1.0;
    h(kChYy, kIdxY) = 1.0;
    h(kChYtheta, kIdxTheta) = 1.0;
    h(kChYthetaDot, kIdxThetaDot) = 1.0;
    h(kChYthetaDot, kIdxBThetaDot) = 1.0;
    h(kChYax, kIdxAx) = 1.0;
    h(kChYax, kIdxBAx) = 1.0;
    h(kChYay, kIdxAy) = 1.0;
    h(kChYay, kIdxBAy) = 1.0;
    return h;
  }();
  return H;
}

WaypointFollower::WaypointFollower(std::vector<Waypoint> route,
                                   ControllerConfig cfg)
    : route_(std::move(route)), cfg_(cfg) {
  if (route_.empty()) {
    throw Error(ErrorCode::EmptyRoute, "waypoint route must be non-empty");
  }
  for (std::size_t i = 0; i < route_.size(); ++i) {
    if (!(route_[i].capture_radius > 0.0)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "waypoint " + std::to_string(i) +
                      " capture_radius must be positive");
    }
  }
}

VelocityCommand WaypointFollower::step(const VehicleState& state) {
  double dx = 0.0;
  double dy = 0.0;
  double dist = 0.0;
  while (active_ < route_.size()) {
    dx = route_[active_].x - state.x;
    dy = route_[active_].y - state.y;
    dist = std::hypot(dx, dy);
    if (dist <= route_[active_].capture_radius) {
      ++active_;
      continue;
    }
    break;
  }
  if (active_ >= route_.size()) {
    return VelocityCommand{0.0, 0.0};
  }
  const double bearing_error = wrap_angle(std::atan2(dy, dx) - state.theta);
  VelocityCommand cmd;
  cmd.yaw_rate = std::clamp(cfg_.k_psi * bearing_error, -cfg_.yaw_rate_max,
                            cfg_.yaw_rate_max);
  cmd.v_forward = std::min(cfg_.v_max, cfg_.k_v * dist);
  return cmd;
}

}  // namespace navguard
