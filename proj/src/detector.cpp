#include "navguard/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "navguard/errors.hpp"

namespace navguard {

namespace {

constexpr double kTauFloor = 1e-6;

}  // namespace

CusumConfig validate_cusum_config(CusumConfig cfg) {
  if (cfg.calibration_len < 2) {
    throw Error(ErrorCode::ConfigInvalid,
                "detector calibration_len must be at least 2");
  }
  if (!(cfg.threshold_scale > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid,
                "detector threshold_scale must be positive");
  }
  if (!(cfg.drift >= 0.0)) {
    throw Error(ErrorCode::ConfigInvalid,
                "detector drift must be non-negative");
  }
  if (cfg.channels.empty()) {
    throw Error(ErrorCode::ConfigInvalid,
                "detector must monitor at least one channel");
  }
  for (int c : cfg.channels) {
    if (c < 0 || c >= kMeasDim) {
      throw Error(ErrorCode::ConfigInvalid,
                  "detector channel index " + std::to_string(c) +
                      " out of range 0..5");
    }
  }
  if (!cfg.weights.empty() &&
      cfg.weights.size() != static_cast<std::size_t>(cfg.calibration_len)) {
    throw Error(ErrorCode::ConfigInvalid,
                "detector weights length must equal calibration_len");
  }
  return cfg;
}

Vec6 calibrate(const std::vector<Vec6>& window, double kappa,
               const std::vector<double>& weights) {
  if (window.size() < 2) {
    throw Error(ErrorCode::WindowTooShort,
                "calibration window has " + std::to_string(window.size()) +
                    " residuals, need at least 2");
  }
  if (!weights.empty() && weights.size() != window.size()) {
    throw Error(ErrorCode::ConfigInvalid,
                "calibration weights length " + std::to_string(weights.size()) +
                    " does not match window length " +
                    std::to_string(window.size()));
  }
  if (!(kappa > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid,
                "threshold scale must be positive");
  }
  Vec6 tau = Vec6::Zero();
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    tau += w * window[i].cwiseAbs();
  }
  tau *= kappa;
  return tau.cwiseMax(kTauFloor);
}

std::pair<CusumState, Decision> cusum_step(const CusumState& state,
                                           const Vec6& r,
                                           const CusumConfig& cfg) {
  validate_cusum_config(cfg);
  if (!state.calibrated) {
    throw Error(ErrorCode::NotCalibrated,
                "cusum_step requires calibrated thresholds");
  }
  CusumState next = state;
  next.k = state.k + 1;
  next.fired.clear();
  for (int c : cfg.channels) {
    if (cfg.mode == CusumMode::paper_literal) {
      const double s = std::max(0.0, state.S_pos(c) + std::abs(r(c)));
      if (s > state.tau(c)) {
        next.fired.push_back(c);
        next.S_pos(c) = 0.0;
      } else {
        next.S_pos(c) = s;
      }
      next.S_neg(c) = 0.0;
    } else {
      const double sp = std::max(0.0, state.S_pos(c) + r(c) - cfg.drift);
      const double sn = std::max(0.0, state.S_neg(c) - r(c) - cfg.drift);
      if (sp > state.tau(c) || sn > state.tau(c)) {
        next.fired.push_back(c);
        next.S_pos(c) = 0.0;
        next.S_neg(c) = 0.0;
      } else {
        next.S_pos(c) = sp;
        next.S_neg(c) = sn;
      }
    }
  }
  std::sort(next.fired.begin(), next.fired.end());
  next.history.push_back(r);
  const std::size_t window = static_cast<std::size_t>(cfg.calibration_len);
  if (next.history.size() > window) {
    next.history.erase(next.history.begin(),
                       next.history.end() - static_cast<long>(window));
  }
  return {next, decide(next)};
}

Decision decide(const CusumState& state) {
  Decision d;
  if (!state.fired.empty()) {
    d.hypothesis = Hypothesis::H1;
    d.alarm_channel = state.fired.front();
    d.k_alpha = state.k;
  }
  return d;
}

CusumDetector::CusumDetector(CusumConfig cfg)
    : cfg_(validate_cusum_config(std::move(cfg))) {}

Decision CusumDetector::observe(const Vec6& r_norm) {
  if (!state_.calibrated) {
    buffer_.push_back(r_norm);
    if (buffer_.size() == static_cast<std::size_t>(cfg_.calibration_len)) {
      state_.tau = calibrate(buffer_, cfg_.threshold_scale, cfg_.weights);
      state_.calibrated = true;
      state_.history = buffer_;
      state_.k = static_cast<long>(buffer_.size()) - 1;
      buffer_.clear();
    }
    return Decision{};
  }
  auto [next, decision] = cusum_step(state_, r_norm, cfg_);
  state_ = std::move(next);
  return decision;
}

}  // namespace navguard
