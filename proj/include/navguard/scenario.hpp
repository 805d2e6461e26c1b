#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "navguard/config.hpp"
#include "navguard/detector.hpp"
#include "navguard/types.hpp"
#include "navguard/vehicle.hpp"

namespace navguard {

// Everything observable at one simulation step. The CSV writer emits the
// documented column subset; innovation_std and nis are kept for analysis
// and are not logged.
struct StepRecord {
  long k = 0;
  double t = 0.0;
  VehicleState truth;
  Vec6 y = Vec6::Zero();
  bool attacked = false;
  Vec11 est = Vec11::Zero();
  Vec6 resid = Vec6::Zero();
  Vec6 resid_norm = Vec6::Zero();
  Vec6 S = Vec6::Zero();    // per-channel test statistic after the step
  Vec6 tau = Vec6::Zero();  // zero until the detector is calibrated
  Hypothesis hypothesis = Hypothesis::H0;
  std::optional<int> alarm_channel;
  std::optional<long> k_alpha;
  Vec6 innovation_std = Vec6::Zero();  // sqrt of diag(H P H^T + R)
  double nis = 0.0;                    // r^T (H P H^T + R)^-1 r
};

struct SimLog {
  std::vector<StepRecord> steps;
};

// Run-level scores. detection_delay_steps is present iff an attack exists
// in the log and some alarm fires at or after its onset.
struct Metrics {
  std::optional<long> detection_delay_steps;
  long false_alarm_count = 0;
  double position_rmse = 0.0;  // m, over the attack-free prefix
  std::vector<long> alarm_times;
};

// Closed-loop run: guidance command, truth propagation with process noise,
// sensor sampling, attack injection, filter predict/update, residual
// standardization, threshold calibration over the first N residuals, then
// the accumulator test. Runs for the full duration regardless of alarms and
// is fully determined by (config, seed).
std::pair<SimLog, Metrics> run_scenario(const ScenarioConfig& cfg);

// Scores a completed log: alarms before the first attacked step count as
// false alarms, the detection delay is the first alarm at or after onset
// minus the onset step, and the position RMSE covers the attack-free
// prefix.
Metrics compute_metrics(const SimLog& log, const ScenarioConfig& cfg);

}  // namespace navguard
