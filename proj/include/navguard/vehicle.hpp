#pragma once

#include <cstddef>
#include <vector>

#include "navguard/types.hpp"

namespace navguard {

// Planar vehicle state with body-frame velocities and accelerations plus
// the three inertial sensor biases, in StateIndex order.
struct VehicleState {
  double x = 0.0;            // east position (m)
  double y = 0.0;            // north position (m)
  double theta = 0.0;        // yaw angle (rad), kept in (-pi, pi]
  double vx = 0.0;           // body-x velocity (m/s)
  double vy = 0.0;           // body-y velocity (m/s)
  double theta_dot = 0.0;    // yaw rate (rad/s)
  double ax = 0.0;           // body-x acceleration (m/s^2)
  double ay = 0.0;           // body-y acceleration (m/s^2)
  double b_theta_dot = 0.0;  // gyro bias (rad/s)
  double b_ax = 0.0;         // x accelerometer bias (m/s^2)
  double b_ay = 0.0;         // y accelerometer bias (m/s^2)

  Vec11 to_vector() const;
  static VehicleState from_vector(const Vec11& v);
};

// Normalizes an angle to (-pi, pi].
double wrap_angle(double a) noexcept;

// One discrete step of the kinematic map over sample period T:
// positions advance by the body velocities rotated into the world frame,
// yaw by T * theta_dot, velocities by T * a; yaw rate, accelerations and
// biases are held constant (their evolution is the caller's process noise).
// Throws NonFiniteState if any output component is non-finite.
VehicleState propagate(const VehicleState& state, double T);

// Jacobian of propagate with respect to the state, evaluated at `state`.
Mat11 state_jacobian(const VehicleState& state, double T);

// Noiseless 6-channel output [y_x, y_y, y_theta, y_theta_dot, y_ax, y_ay]:
// positions and yaw pass through, the rate and acceleration channels carry
// their biases additively. Channels 0..1 are the GNSS group, 2..5 the
// inertial group.
Vec6 measurement_map(const VehicleState& state);

// Constant Jacobian of measurement_map (the model is exactly linear).
const Mat6x11& measurement_jacobian();

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double capture_radius = 1.0;  // m, must be positive
};

// Commanded body-x velocity and yaw rate, clamped to the configured limits.
struct VelocityCommand {
  double v_forward = 0.0;
  double yaw_rate = 0.0;
};

struct ControllerConfig {
  double k_psi = 1.5;         // yaw-rate gain on bearing error (1/s)
  double k_v = 0.5;           // speed gain on distance (1/s)
  double v_max = 8.0;         // m/s
  double yaw_rate_max = 2.0;  // rad/s
};

// Proportional waypoint-following guidance. The active waypoint advances
// when the vehicle is within its capture radius; after the last waypoint
// the command is zero. Holds the active index, so one instance drives one
// run.
class WaypointFollower {
 public:
  WaypointFollower(std::vector<Waypoint> route, ControllerConfig cfg);

  VelocityCommand step(const VehicleState& state);

  bool finished() const noexcept { return active_ >= route_.size(); }
  std::size_t active_index() const noexcept { return active_; }

 private:
  std::vector<Waypoint> route_;
  ControllerConfig cfg_;
  std::size_t active_ = 0;
};

}  // namespace navguard
