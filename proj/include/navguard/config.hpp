#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navguard/detector.hpp"
#include "navguard/sensors.hpp"
#include "navguard/types.hpp"
#include "navguard/vehicle.hpp"

namespace navguard {

// Filter tuning. Covariances are configured as diagonals; x0 empty means
// the estimate is initialized from the first measurement (positions and
// yaw from channels 0..2, everything else zero).
struct FilterConfig {
  std::optional<Vec11> x0;
  Vec11 P0_diag = default_P0_diag();
  Vec11 Q_diag = default_Q_diag();
  Vec6 R_diag = default_R_diag();

  Mat11 P0() const { return P0_diag.asDiagonal(); }
  Mat11 Q() const { return Q_diag.asDiagonal(); }
  Mat6 R() const { return R_diag.asDiagonal(); }

  static Vec11 default_P0_diag();
  static Vec11 default_Q_diag();
  static Vec6 default_R_diag();
};

// Full description of one closed-loop run. The scenario seed drives the
// single random stream of the run.
struct ScenarioConfig {
  double duration = 60.0;  // s
  double T = 0.1;          // s, sample period
  std::uint64_t seed = 1;
  std::vector<Waypoint> route;  // empty route means zero commands
  ControllerConfig controller;
  double k_accel = 1.0;  // acceleration command gain (1/s)
  double a_max = 3.0;    // acceleration command clamp (m/s^2)
  SensorSuiteConfig sensor;
  std::optional<AttackSpec> attack;
  FilterConfig filter;
  CusumConfig detector;
};

// Number of steps, duration / T rounded to the nearest integer.
long step_count(const ScenarioConfig& cfg);

// Checks every ScenarioConfig invariant; throws ConfigInvalid naming the
// offending field.
ScenarioConfig validate_config(ScenarioConfig cfg);

// Parses the INI-style config text (sections [scenario], [sensor],
// [attack], [filter], [detector]; '#' comments; one "key = value" per
// line; vectors as whitespace-separated numbers; route as
// "x y radius; x y radius"). Unknown sections or keys are rejected.
ScenarioConfig parse_config_text(const std::string& text);

// Reads and parses a config file. An unreadable file is a config error.
ScenarioConfig load_config(const std::string& path);

// The canned spoofing scenario: 60 s at 10 Hz along a straight diagonal
// route, with a 10 m step attack on the north GNSS channel at 40 s.
ScenarioConfig paper_fig6_config();

}  // namespace navguard
