#include "navguard/sensors.hpp"

#include <string>

#include "navguard/errors.hpp"

namespace navguard {

Vec6 SensorSuiteConfig::default_noise_std() {
  Vec6 s;
  // GNSS position (m), heading (rad), gyro (rad/s), accelerometers (m/s^2).
  s << 0.5, 0.5, 0.01, 0.01, 0.05, 0.05;
  return s;
}

Vec6 SensorSuiteConfig::default_bias() {
  Vec6 b;
  b << 0.0, 0.0, 0.0, 0.02, 0.1, 0.1;
  return b;
}

MeasurementSample sample_measurement(const VehicleState& truth,
                                     const SensorSuiteConfig& cfg,
                                     RandomStream& rng, long k, double T) {
  VehicleState biased = truth;
  biased.b_theta_dot = cfg.bias(kChYthetaDot);
  biased.b_ax = cfg.bias(kChYax);
  biased.b_ay = cfg.bias(kChYay);
  MeasurementSample sample;
  sample.k = k;
  sample.t = static_cast<double>(k) * T;
  sample.y = measurement_map(biased);
  sample.y(kChYx) += cfg.bias(kChYx);
  sample.y(kChYy) += cfg.bias(kChYy);
  sample.y(kChYtheta) += cfg.bias(kChYtheta);
  for (int i = 0; i < kMeasDim; ++i) {
    sample.y(i) += cfg.noise_std(i) * rng.normal();
  }
  sample.attacked = false;
  return sample;
}

MeasurementSample inject_attack(const MeasurementSample& sample,
                                const AttackSpec& attack, double /*T*/) {
  if (attack.profile == AttackProfile::none ||
      sample.t < attack.start_time) {
    return sample;
  }
  MeasurementSample out = sample;
  const double alpha = attack.profile == AttackProfile::step
                           ? attack.magnitude
                           : attack.slope * (sample.t - attack.start_time);
  out.y(attack.channel) += alpha;
  out.attacked = true;
  return out;
}

Eigen::VectorXd process_noise_sample(const Eigen::MatrixXd& Q,
                                     RandomStream& rng) {
  const Eigen::Index n = Q.rows();
  if (Q.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Q must be square");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 *
                                                     (Q + Q.transpose()));
  const double scale = 1.0 + eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd clamped = eig.eigenvalues();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (clamped(i) < -1e-9 * scale) {
      throw Error(ErrorCode::NotPsd,
                  "Q has eigenvalue " + std::to_string(clamped(i)));
    }
    clamped(i) = clamped(i) > 0.0 ? clamped(i) : 0.0;
  }
  // Symmetric square root keeps a diagonal Q exactly diagonal.
  const Eigen::MatrixXd L = eig.eigenvectors() *
                            clamped.cwiseSqrt().asDiagonal() *
                            eig.eigenvectors().transpose();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = rng.normal();
  }
  return L * z;
}

}  // namespace navguard
