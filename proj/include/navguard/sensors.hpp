#pragma once

#include <cstdint>

#include "navguard/random.hpp"
#include "navguard/types.hpp"
#include "navguard/vehicle.hpp"

namespace navguard {

// Per-channel noise and constant-bias description of the sensor suite.
// Rate and acceleration biases (channels 3..5) enter through the state's
// bias components; position and heading biases (channels 0..2) are added
// to the sampled channels directly, since the state carries no bias for
// them. `seed` seeds a standalone stream when the suite is driven outside
// a scenario; inside a scenario the single run stream is used instead.
struct SensorSuiteConfig {
  Vec6 noise_std = default_noise_std();
  Vec6 bias = default_bias();
  std::uint64_t seed = 1;

  static Vec6 default_noise_std();
  static Vec6 default_bias();
};

enum class AttackProfile { none, step, ramp };

// Additive corruption of a single measurement channel, active from
// start_time onward. Step adds `magnitude`; ramp adds
// slope * (t - start_time).
struct AttackSpec {
  int channel = 0;
  double start_time = 0.0;  // s
  double magnitude = 0.0;   // channel units (step profile)
  double slope = 0.0;       // channel units per second (ramp profile)
  AttackProfile profile = AttackProfile::none;
};

// One stacked measurement. `attacked` is a ground-truth annotation for
// scoring only; the fusion and detection pipeline consumes y alone.
struct MeasurementSample {
  long k = 0;
  double t = 0.0;
  Vec6 y = Vec6::Zero();
  bool attacked = false;
};

// Samples y = measurement_map(truth') + noise, where truth' carries
// cfg.bias in its bias states and noise is drawn per channel in fixed
// order (exactly six normal draws, even for zero noise).
MeasurementSample sample_measurement(const VehicleState& truth,
                                     const SensorSuiteConfig& cfg,
                                     RandomStream& rng, long k, double T);

// Applies the attack profile to its channel once t >= start_time and sets
// the annotation flag; returns the sample unchanged before onset or for
// profile none.
MeasurementSample inject_attack(const MeasurementSample& sample,
                                const AttackSpec& attack, double T);

// Draws v ~ N(0, Q) through the symmetric PSD square root of Q. Consumes
// exactly Q.rows() normal draws. Throws NotPsd for an indefinite Q.
Eigen::VectorXd process_noise_sample(const Eigen::MatrixXd& Q,
                                     RandomStream& rng);

}  // namespace navguard
