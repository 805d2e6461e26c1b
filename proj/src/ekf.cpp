#include "navguard/ekf.hpp"

#include <cmath>
#include <string>

#include "navguard/errors.hpp"
#include "navguard/vehicle.hpp"

namespace navguard {

EkfState ekf_predict(const EkfState& state, const Mat11& Q, double T) {
  const VehicleState s = VehicleState::from_vector(state.xhat);
  const Mat11 F = state_jacobian(s, T);
  EkfState out;
  out.xhat = propagate(s, T).to_vector();
  const Mat11 prior = F * state.P * F.transpose() + Q;
  out.P = 0.5 * (prior + prior.transpose());
  out.k = state.k;
  return out;
}

std::pair<EkfState, Residual> ekf_update(const EkfState& state, const Vec6& y,
                                         const Mat6& R) {
  const Mat6x11& H = measurement_jacobian();
  Vec6 r = y - H * state.xhat;
  r(kChYtheta) = wrap_angle(r(kChYtheta));
  const Mat6 S_raw = H * state.P * H.transpose() + R;
  const Mat6 S = 0.5 * (S_raw + S_raw.transpose());
  Eigen::LLT<Mat6> llt(S);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularInnovation,
                "innovation covariance failed SPD factorization");
  }
  const Eigen::Matrix<double, 11, 6> K =
      llt.solve(H * state.P).transpose();  // P H^T S^-1

  EkfState out;
  out.xhat = state.xhat + K * r;
  out.xhat(kIdxTheta) = wrap_angle(out.xhat(kIdxTheta));
  const Mat11 A = Mat11::Identity() - K * H;
  const Mat11 joseph = A * state.P * A.transpose() + K * R * K.transpose();
  out.P = 0.5 * (joseph + joseph.transpose());
  out.k = state.k + 1;
  for (int i = 0; i < kStateDim; ++i) {
    if (!std::isfinite(out.xhat(i))) {
      throw Error(ErrorCode::NonFiniteState,
                  "filter update produced a non-finite estimate at state "
                  "index " +
                      std::to_string(i));
    }
  }

  Residual res;
  res.k = out.k;
  res.r = r;
  res.S = S;
  for (int i = 0; i < kMeasDim; ++i) {
    const double sii = S(i, i);
    if (!(sii > 0.0)) {
      throw Error(ErrorCode::SingularInnovation,
                  "innovation variance of channel " + std::to_string(i) +
                      " is not positive");
    }
    res.r_norm(i) = r(i) / std::sqrt(sii);
  }
  return {out, res};
}

std::pair<Vec6, Mat6> residual_statistics(const std::vector<Residual>& rs) {
  if (rs.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "need at least two residuals, got " +
                    std::to_string(rs.size()));
  }
  Vec6 mean = Vec6::Zero();
  for (const Residual& res : rs) {
    mean += res.r;
  }
  mean /= static_cast<double>(rs.size());
  Mat6 cov = Mat6::Zero();
  for (const Residual& res : rs) {
    const Vec6 d = res.r - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(rs.size() - 1);
  return {mean, cov};
}

}  // namespace navguard
