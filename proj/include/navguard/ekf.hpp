#pragma once

#include <utility>
#include <vector>

#include "navguard/types.hpp"

namespace navguard {

// Filter state between steps. k counts completed measurement updates.
struct EkfState {
  Vec11 xhat = Vec11::Zero();
  Mat11 P = Mat11::Identity();
  long k = 0;
};

// Innovation record for one update: r = y - H xhat with covariance
// S = H P H^T + R, plus the per-channel standardized values r_i / sqrt(S_ii).
struct Residual {
  long k = 0;
  Vec6 r = Vec6::Zero();
  Mat6 S = Mat6::Identity();
  Vec6 r_norm = Vec6::Zero();
};

// Time update: xhat through the kinematic map, P through F P F^T + Q with
// F the state Jacobian at the pre-update estimate. k is unchanged.
EkfState ekf_predict(const EkfState& state, const Mat11& Q, double T);

// Measurement update with Joseph-form covariance. The yaw innovation is
// wrapped to (-pi, pi] before the gain is applied. k advances by one.
// Throws SingularInnovation if S cannot be factorized.
std::pair<EkfState, Residual> ekf_update(const EkfState& state, const Vec6& y,
                                         const Mat6& R);

// Empirical mean and sample covariance of the innovation vectors.
// Throws InsufficientData for fewer than two residuals.
std::pair<Vec6, Mat6> residual_statistics(const std::vector<Residual>& rs);

}  // namespace navguard
