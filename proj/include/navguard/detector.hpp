#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "navguard/types.hpp"

namespace navguard {

// Two accumulator variants.
//
// paper_literal folds the absolute residual into a single statistic,
// S <- max(0, S + |r|), alarms once S exceeds tau and then restarts from
// zero. The statistic is nondecreasing between resets, so under noisy
// residuals it eventually alarms even with no attack; it is intended for
// short horizons and for reproducing the original formulation exactly.
//
// standard subtracts a drift allowance and tracks both shift directions:
// S_pos <- max(0, S_pos + r - delta), S_neg <- max(0, S_neg - r - delta),
// alarming when either side exceeds tau. Both sides reset after an alarm.
enum class CusumMode { paper_literal, standard };

struct CusumConfig {
  int calibration_len = 10;      // N, residual count consumed by calibration
  double threshold_scale = 5.0;  // kappa
  double drift = 0.5;            // delta, standardized units (standard mode)
  CusumMode mode = CusumMode::standard;
  std::vector<int> channels = {0, 1, 2, 3, 4, 5};  // monitored subset
  std::vector<double> weights;   // calibration weights; empty = all ones
};

struct CusumState {
  Vec6 S_pos = Vec6::Zero();
  Vec6 S_neg = Vec6::Zero();
  Vec6 tau = Vec6::Zero();
  long k = -1;  // index of the last processed residual
  bool calibrated = false;
  std::vector<Vec6> history;       // rolling window of the last N residuals
  std::vector<int> fired;          // channels that alarmed at step k
};

enum class Hypothesis { H0, H1 };

// Outcome of one detector step. Alarms are edge events: alarm_channel and
// k_alpha are present exactly when hypothesis is H1 at the current step.
struct Decision {
  Hypothesis hypothesis = Hypothesis::H0;
  std::optional<int> alarm_channel;
  std::optional<long> k_alpha;
};

// Checks every CusumConfig invariant; throws ConfigInvalid naming the
// offending field.
CusumConfig validate_cusum_config(CusumConfig cfg);

// Per-channel thresholds tau_c = kappa * sum_i w_i |r_c(i)| over the
// window, floored at 1e-6. Weights default to all ones. Throws
// WindowTooShort for a window of fewer than two residuals.
Vec6 calibrate(const std::vector<Vec6>& window, double kappa,
               const std::vector<double>& weights = {});

// Advances every monitored channel by one residual and reports the step's
// decision. Alarming channels reset to zero; tau is retained. Throws
// NotCalibrated if the state has no thresholds yet.
std::pair<CusumState, Decision> cusum_step(const CusumState& state,
                                           const Vec6& r,
                                           const CusumConfig& cfg);

// Decision implied by the current state: H1 with the lowest-index channel
// that fired at step k, H0 otherwise.
Decision decide(const CusumState& state);

// Buffers the first N standardized residuals, calibrates thresholds from
// them, then steps the accumulators. Step indices continue the input
// count, so the first post-calibration residual is step N.
class CusumDetector {
 public:
  explicit CusumDetector(CusumConfig cfg);

  // Feeds one standardized residual vector; returns H0 during calibration.
  Decision observe(const Vec6& r_norm);

  const CusumState& state() const noexcept { return state_; }
  bool calibrated() const noexcept { return state_.calibrated; }

 private:
  CusumConfig cfg_;
  CusumState state_;
  std::vector<Vec6> buffer_;
};

}  // namespace navguard
