#pragma once

#include <Eigen/Dense>

namespace navguard {

inline constexpr int kStateDim = 11;
inline constexpr int kMeasDim = 6;

using Vec6 = Eigen::Matrix<double, kMeasDim, 1>;
using Vec11 = Eigen::Matrix<double, kStateDim, 1>;
using Mat6 = Eigen::Matrix<double, kMeasDim, kMeasDim>;
using Mat11 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Mat6x11 = Eigen::Matrix<double, kMeasDim, kStateDim>;

// State vector ordering, used by every matrix in the library.
enum StateIndex : int {
  kIdxX = 0,
  kIdxY = 1,
  kIdxTheta = 2,
  kIdxVx = 3,
  kIdxVy = 4,
  kIdxThetaDot = 5,
  kIdxAx = 6,
  kIdxAy = 7,
  kIdxBThetaDot = 8,
  kIdxBAx = 9,
  kIdxBAy = 10,
};

// Measurement channel ordering: GNSS position first, then the inertial
// channels.
enum ChannelIndex : int {
  kChYx = 0,
  kChYy = 1,
  kChYtheta = 2,
  kChYthetaDot = 3,
  kChYax = 4,
  kChYay = 5,
};

}  // namespace navguard
