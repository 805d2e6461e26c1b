#include "navguard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "navguard/ekf.hpp"
#include "navguard/errors.hpp"
#include "navguard/random.hpp"
#include "navguard/sensors.hpp"

namespace navguard {

namespace {

// Initial estimate from the first measurement: positions and yaw from the
// position and heading channels, all other components zero.
Vec11 lift_measurement(const Vec6& y) {
  Vec11 x0 = Vec11::Zero();
  x0(kIdxX) = y(kChYx);
  x0(kIdxY) = y(kChYy);
  x0(kIdxTheta) = wrap_angle(y(kChYtheta));
  return x0;
}

Residual annotation_residual(const EkfState& ekf, const Vec6& y,
                             const Mat6& R) {
  const Mat6x11& H = measurement_jacobian();
  Residual res;
  res.k = ekf.k;
  res.r = y - H * ekf.xhat;
  res.r(kChYtheta) = wrap_angle(res.r(kChYtheta));
  Mat6 S = H * ekf.P * H.transpose() + R;
  res.S = 0.5 * (S + S.transpose());
  for (int i = 0; i < kMeasDim; ++i) {
    res.r_norm(i) = res.r(i) / std::sqrt(res.S(i, i));
  }
  return res;
}

double residual_nis(const Residual& res) {
  Eigen::LLT<Mat6> llt(res.S);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularInnovation,
                "innovation covariance failed SPD factorization");
  }
  return res.r.dot(llt.solve(res.r));
}

}  // namespace

std::pair<SimLog, Metrics> run_scenario(const ScenarioConfig& config) {
  const ScenarioConfig cfg = validate_config(config);
  const long steps = step_count(cfg);
  const Mat11 Q = cfg.filter.Q();
  const Mat6 R = cfg.filter.R();

  RandomStream rng(cfg.seed);
  std::optional<WaypointFollower> follower;
  if (!cfg.route.empty()) {
    follower.emplace(cfg.route, cfg.controller);
  }
  CusumDetector detector(cfg.detector);

  SimLog log;
  log.steps.reserve(static_cast<std::size_t>(steps));
  VehicleState truth;  // runs start at the origin, at rest
  EkfState ekf;

  for (long k = 0; k < steps; ++k) {
    try {
      if (k > 0) {
        if (follower) {
          // Guidance acts on the true state, so the route is completed
          // regardless of attacks on the measurements.
          const VelocityCommand cmd = follower->step(truth);
          truth.theta_dot = cmd.yaw_rate;
          truth.ax = std::clamp(cfg.k_accel * (cmd.v_forward - truth.vx),
                                -cfg.a_max, cfg.a_max);
          truth.ay = 0.0;
        }
        truth = propagate(truth, cfg.T);
        const Vec11 nu(process_noise_sample(Q, rng));
        Vec11 tv = truth.to_vector() + nu;
        tv(kIdxTheta) = wrap_angle(tv(kIdxTheta));
        truth = VehicleState::from_vector(tv);
        ekf = ekf_predict(ekf, Q, cfg.T);
      }

      MeasurementSample sample =
          sample_measurement(truth, cfg.sensor, rng, k, cfg.T);
      if (cfg.attack) {
        sample = inject_attack(sample, *cfg.attack, cfg.T);
      }

      Residual res;
      if (k == 0) {
        ekf.xhat = cfg.filter.x0 ? *cfg.filter.x0
                                 : lift_measurement(sample.y);
        ekf.P = cfg.filter.P0();
        ekf.k = 0;
        // The first measurement seeds the estimate, so step 0 records the
        // innovation against the prior instead of running an update.
        res = annotation_residual(ekf, sample.y, R);
      } else {
        auto [next, update_res] = ekf_update(ekf, sample.y, R);
        ekf = next;
        res = update_res;
      }

      const Decision decision = detector.observe(res.r_norm);
      const CusumState& ds = detector.state();

      StepRecord rec;
      rec.k = k;
      rec.t = sample.t;
      rec.truth = truth;
      rec.y = sample.y;
      rec.attacked = sample.attacked;
      rec.est = ekf.xhat;
      rec.resid = res.r;
      rec.resid_norm = res.r_norm;
      rec.S = ds.S_pos.cwiseMax(ds.S_neg);
      rec.tau = ds.calibrated ? ds.tau : Vec6::Zero();
      rec.hypothesis = decision.hypothesis;
      rec.alarm_channel = decision.alarm_channel;
      rec.k_alpha = decision.k_alpha;
      for (int i = 0; i < kMeasDim; ++i) {
        rec.innovation_std(i) = std::sqrt(res.S(i, i));
      }
      rec.nis = residual_nis(res);
      log.steps.push_back(rec);
    } catch (const Error& e) {
      throw Error(e.code(),
                  "at step " + std::to_string(k) + ": " + e.what());
    }
  }
  Metrics metrics = compute_metrics(log, cfg);
  return {std::move(log), std::move(metrics)};
}

Metrics compute_metrics(const SimLog& log, const ScenarioConfig& cfg) {
  (void)cfg;
  Metrics m;
  std::optional<long> k_attack;
  for (const StepRecord& rec : log.steps) {
    if (rec.attacked) {
      k_attack = rec.k;
      break;
    }
  }
  for (const StepRecord& rec : log.steps) {
    if (rec.k_alpha) {
      m.alarm_times.push_back(*rec.k_alpha);
    }
  }
  for (long ka : m.alarm_times) {
    if (!k_attack || ka < *k_attack) {
      ++m.false_alarm_count;
    } else if (!m.detection_delay_steps) {
      m.detection_delay_steps = ka - *k_attack;
    }
  }
  double sq_sum = 0.0;
  long count = 0;
  for (const StepRecord& rec : log.steps) {
    if (k_attack && rec.k >= *k_attack) {
      break;
    }
    const double dx = rec.truth.x - rec.est(kIdxX);
    const double dy = rec.truth.y - rec.est(kIdxY);
    sq_sum += dx * dx + dy * dy;
    ++count;
  }
  m.position_rmse = count > 0 ? std::sqrt(sq_sum / static_cast<double>(count))
                              : 0.0;
  return m;
}

}  // namespace navguard
