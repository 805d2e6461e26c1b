#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "navguard/detector.hpp"
#include "navguard/errors.hpp"
#include "navguard/random.hpp"

using namespace navguard;

namespace {

CusumState calibrated_state(double tau) {
  CusumState s;
  s.tau = Vec6::Constant(tau);
  s.calibrated = true;
  return s;
}

Vec6 only_channel(int c, double value) {
  Vec6 r = Vec6::Zero();
  r(c) = value;
  return r;
}

// Independent restatement of both accumulation rules, kept deliberately
// naive: plain loops over explicit per-channel scalars.
struct OracleChannel {
  double pos = 0.0;
  double neg = 0.0;
};

struct Oracle {
  std::vector<OracleChannel> ch{6};

  // Returns fired channels, ascending.
  std::vector<int> step(const Vec6& r, const Vec6& tau, const CusumConfig& cfg) {
    std::vector<int> fired;
    for (int c : cfg.channels) {
      if (cfg.mode == CusumMode::paper_literal) {
        double s = ch[c].pos + std::abs(r(c));
        if (s < 0.0) s = 0.0;
        ch[c].neg = 0.0;
        if (s > tau(c)) {
          fired.push_back(c);
          ch[c].pos = 0.0;
        } else {
          ch[c].pos = s;
        }
      } else {
        double sp = ch[c].pos + r(c) - cfg.drift;
        double sn = ch[c].neg - r(c) - cfg.drift;
        if (sp < 0.0) sp = 0.0;
        if (sn < 0.0) sn = 0.0;
        if (sp > tau(c) || sn > tau(c)) {
          fired.push_back(c);
          ch[c].pos = 0.0;
          ch[c].neg = 0.0;
        } else {
          ch[c].pos = sp;
          ch[c].neg = sn;
        }
      }
    }
    return fired;
  }
};

}  // namespace

TEST_CASE("config validation rejects each bad field") {
  CusumConfig good;
  CHECK(validate_cusum_config(good).calibration_len == 10);

  CusumConfig bad = good;
  bad.calibration_len = 1;
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.threshold_scale = 0.0;
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.drift = -0.1;
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.channels = {};
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.channels = {0, 6};
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.channels = {-1};
  CHECK_THROWS_AS(validate_cusum_config(bad), Error);

  bad = good;
  bad.weights = {1.0, 1.0, 1.0};  // calibration_len is 10
  try {
    validate_cusum_config(bad);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
  }
}

TEST_CASE("calibration floors an all-zero window at a tiny threshold") {
  const std::vector<Vec6> window(2, Vec6::Zero());
  const Vec6 tau = calibrate(window, 5.0);
  CHECK((tau - Vec6::Constant(1e-6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("calibration sums absolute residuals with unit weights") {
  const std::vector<Vec6> window(10, Vec6::Ones());
  const Vec6 tau = calibrate(window, 1.0);
  CHECK((tau - Vec6::Constant(10.0)).cwiseAbs().maxCoeff() == 0.0);

  // Signs do not matter and the scale multiplies through.
  std::vector<Vec6> mixed = {Vec6::Constant(-2.0), Vec6::Constant(3.0)};
  CHECK((calibrate(mixed, 2.0) - Vec6::Constant(10.0)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("calibration applies explicit weights elementwise") {
  const std::vector<Vec6> window(2, Vec6::Ones());
  const Vec6 tau = calibrate(window, 2.0, {0.25, 0.25});
  CHECK((tau - Vec6::Constant(1.0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("calibration rejects short windows and bad arguments") {
  try {
    calibrate({Vec6::Ones()}, 1.0);
    FAIL("expected WindowTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooShort);
  }
  CHECK_THROWS_AS(calibrate({}, 1.0), Error);
  const std::vector<Vec6> window(3, Vec6::Ones());
  CHECK_THROWS_AS(calibrate(window, 1.0, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(calibrate(window, 0.0), Error);
  CHECK_THROWS_AS(calibrate(window, -1.0), Error);
}

TEST_CASE("stepping an uncalibrated state is an error") {
  CusumState fresh;
  try {
    cusum_step(fresh, Vec6::Zero(), CusumConfig{});
    FAIL("expected NotCalibrated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCalibrated);
  }
}

TEST_CASE("a zero residual stream never alarms in either mode") {
  for (CusumMode mode : {CusumMode::paper_literal, CusumMode::standard}) {
    CusumConfig cfg;
    cfg.mode = mode;
    CusumState s = calibrated_state(1.0);
    for (int k = 0; k < 100; ++k) {
      auto [next, d] = cusum_step(s, Vec6::Zero(), cfg);
      s = next;
      CHECK(d.hypothesis == Hypothesis::H0);
      CHECK(!d.alarm_channel.has_value());
    }
    CHECK(s.S_pos.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.k == 99);
  }
}

TEST_CASE("accumulate-and-reset trace with unsigned accumulation") {
  CusumConfig cfg;
  cfg.mode = CusumMode::paper_literal;
  cfg.channels = {0};
  CusumState s = calibrated_state(6.0);
  const double inputs[] = {0.0, 0.0, 5.0, 5.0, 0.0};
  const double expected_S[] = {0.0, 0.0, 5.0, 0.0, 0.0};
  const bool expected_alarm[] = {false, false, false, true, false};
  for (int k = 0; k < 5; ++k) {
    auto [next, d] = cusum_step(s, only_channel(0, inputs[k]), cfg);
    s = next;
    CHECK(s.S_pos(0) == expected_S[k]);
    CHECK((d.hypothesis == Hypothesis::H1) == expected_alarm[k]);
    if (expected_alarm[k]) {
      CHECK(d.alarm_channel.value() == 0);
      CHECK(d.k_alpha.value() == k);
    }
  }
}

TEST_CASE("unsigned accumulation treats negative residuals by magnitude") {
  CusumConfig cfg;
  cfg.mode = CusumMode::paper_literal;
  cfg.channels = {0};
  CusumState s = calibrated_state(6.0);
  auto [s1, d1] = cusum_step(s, only_channel(0, -5.0), cfg);
  CHECK(s1.S_pos(0) == 5.0);
  auto [s2, d2] = cusum_step(s1, only_channel(0, -5.0), cfg);
  CHECK(d2.hypothesis == Hypothesis::H1);
}

TEST_CASE("drift-corrected trace alarms on the positive side") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.5;
  cfg.channels = {0};
  CusumState s = calibrated_state(3.0);
  auto [s1, d1] = cusum_step(s, only_channel(0, 2.0), cfg);
  CHECK(s1.S_pos(0) == 1.5);
  CHECK(d1.hypothesis == Hypothesis::H0);
  auto [s2, d2] = cusum_step(s1, only_channel(0, 2.0), cfg);
  CHECK(s2.S_pos(0) == 3.0);  // strict inequality, still quiet
  CHECK(d2.hypothesis == Hypothesis::H0);
  auto [s3, d3] = cusum_step(s2, only_channel(0, 2.0), cfg);
  CHECK(d3.hypothesis == Hypothesis::H1);
  CHECK(d3.alarm_channel.value() == 0);
  CHECK(d3.k_alpha.value() == 2);
  CHECK(s3.S_pos(0) == 0.0);  // reset on alarm
  CHECK(s3.S_neg(0) == 0.0);
}

TEST_CASE("drift-corrected trace alarms on the negative side symmetrically") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.5;
  cfg.channels = {0};
  CusumState s = calibrated_state(3.0);
  Decision last;
  for (int k = 0; k < 3; ++k) {
    auto [next, d] = cusum_step(s, only_channel(0, -2.0), cfg);
    s = next;
    last = d;
    CHECK(s.S_pos(0) == 0.0);  // positive side never accumulates
  }
  CHECK(last.hypothesis == Hypothesis::H1);
  CHECK(last.k_alpha.value() == 2);
}

TEST_CASE("the drift term bleeds off small residuals") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.5;
  cfg.channels = {0};
  CusumState s = calibrated_state(100.0);
  for (int k = 0; k < 1000; ++k) {
    auto [next, d] = cusum_step(s, only_channel(0, 0.4), cfg);
    s = next;
    CHECK(d.hypothesis == Hypothesis::H0);
    CHECK(s.S_pos(0) == 0.0);  // 0.4 - 0.5 clips at zero every step
  }
}

TEST_CASE("alarms are edge events, not levels") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.5;
  cfg.channels = {0};
  CusumState s = calibrated_state(1.0);
  auto [s1, d1] = cusum_step(s, only_channel(0, 10.0), cfg);
  CHECK(d1.hypothesis == Hypothesis::H1);
  auto [s2, d2] = cusum_step(s1, only_channel(0, 0.0), cfg);
  CHECK(d2.hypothesis == Hypothesis::H0);  // back to quiet after the reset
  CHECK(!d2.alarm_channel.has_value());
}

TEST_CASE("simultaneous alarms report the lowest channel index") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.0;
  cfg.channels = {0, 1, 2, 3, 4, 5};
  CusumState s = calibrated_state(1.0);
  Vec6 r = Vec6::Zero();
  r(1) = 10.0;
  r(4) = 10.0;
  auto [next, d] = cusum_step(s, r, cfg);
  CHECK(d.hypothesis == Hypothesis::H1);
  CHECK(d.alarm_channel.value() == 1);
  CHECK(next.fired == std::vector<int>{1, 4});
}

TEST_CASE("unmonitored channels are ignored entirely") {
  CusumConfig cfg;
  cfg.mode = CusumMode::standard;
  cfg.drift = 0.0;
  cfg.channels = {2};
  CusumState s = calibrated_state(1.0);
  for (int k = 0; k < 10; ++k) {
    auto [next, d] = cusum_step(s, only_channel(0, 100.0), cfg);
    s = next;
    CHECK(d.hypothesis == Hypothesis::H0);
  }
  CHECK(s.S_pos(0) == 0.0);
}

TEST_CASE("decide on a fresh state is the null hypothesis") {
  const Decision d = decide(CusumState{});
  CHECK(d.hypothesis == Hypothesis::H0);
  CHECK(!d.alarm_channel.has_value());
  CHECK(!d.k_alpha.has_value());
}

TEST_CASE("larger offsets are detected sooner") {
  long previous = 1000;
  for (double magnitude : {1.0, 2.0, 4.0}) {
    CusumConfig cfg;
    cfg.mode = CusumMode::standard;
    cfg.drift = 0.5;
    cfg.channels = {0};
    CusumState s = calibrated_state(5.0);
    long alarm_at = -1;
    for (int k = 0; k < 1000 && alarm_at < 0; ++k) {
      auto [next, d] = cusum_step(s, only_channel(0, magnitude), cfg);
      s = next;
      if (d.hypothesis == Hypothesis::H1) {
        alarm_at = d.k_alpha.value();
      }
    }
    CHECK(alarm_at >= 0);
    CHECK(alarm_at < previous);
    previous = alarm_at;
  }
}

TEST_CASE("both modes match a naive per-channel oracle exactly") {
  for (CusumMode mode : {CusumMode::paper_literal, CusumMode::standard}) {
    CusumConfig cfg;
    cfg.mode = mode;
    cfg.drift = 0.5;
    cfg.channels = {0, 1, 2, 3, 4, 5};
    CusumState s = calibrated_state(4.0);
    Oracle oracle;
    RandomStream rng(mode == CusumMode::standard ? 101 : 202);
    int alarms = 0;
    for (int k = 0; k < 1000; ++k) {
      Vec6 r;
      for (int i = 0; i < 6; ++i) {
        r(i) = 1.5 * rng.normal();
      }
      auto [next, d] = cusum_step(s, r, cfg);
      const std::vector<int> expected = oracle.step(r, s.tau, cfg);
      s = next;
      CHECK(s.fired == expected);
      alarms += d.hypothesis == Hypothesis::H1 ? 1 : 0;
      for (int i = 0; i < 6; ++i) {
        CHECK(s.S_pos(i) == oracle.ch[i].pos);
        CHECK(s.S_neg(i) == oracle.ch[i].neg);
        CHECK(s.S_pos(i) >= 0.0);
        CHECK(s.S_neg(i) >= 0.0);
      }
    }
    CHECK(alarms > 0);  // the driving noise is hot enough to fire sometimes
  }
}

TEST_CASE("unsigned accumulation alarms even on attack-free noise") {
  // With no drift correction the unsigned sums only grow, so ordinary
  // noise crosses any fixed threshold eventually. This is the documented
  // reason the drift-corrected mode is the scenario default.
  CusumConfig cfg;
  cfg.mode = CusumMode::paper_literal;
  CusumDetector detector(cfg);
  RandomStream rng(33);
  long first_alarm = -1;
  for (int k = 0; k < 2000 && first_alarm < 0; ++k) {
    Vec6 r;
    for (int i = 0; i < 6; ++i) {
      r(i) = rng.normal();
    }
    const Decision d = detector.observe(r);
    if (d.hypothesis == Hypothesis::H1) {
      first_alarm = d.k_alpha.value();
    }
  }
  CHECK(first_alarm >= 0);
}

TEST_CASE("the detector wrapper calibrates itself on the first window") {
  CusumConfig cfg;
  cfg.calibration_len = 10;
  cfg.threshold_scale = 5.0;
  cfg.mode = CusumMode::standard;
  CusumDetector detector(cfg);
  CHECK(!detector.state().calibrated);

  for (int k = 0; k < 10; ++k) {
    const Decision d = detector.observe(Vec6::Constant(0.2));
    CHECK(d.hypothesis == Hypothesis::H0);
  }
  CHECK(detector.state().calibrated);
  // tau = 5 * sum of ten |0.2| values = 10 on every channel.
  CHECK((detector.state().tau - Vec6::Constant(10.0)).cwiseAbs().maxCoeff() <
        1e-12);

  // The first stepped residual is numbered right after the window.
  const Decision d = detector.observe(Vec6::Constant(100.0));
  CHECK(d.hypothesis == Hypothesis::H1);
  CHECK(d.k_alpha.value() == 10);
}

TEST_CASE("the wrapper rejects invalid configs at construction") {
  CusumConfig cfg;
  cfg.calibration_len = 0;
  CHECK_THROWS_AS(CusumDetector{cfg}, Error);
}

TEST_CASE("history keeps the most recent window only") {
  CusumConfig cfg;
  cfg.calibration_len = 3;
  cfg.mode = CusumMode::standard;
  CusumState s = calibrated_state(1e9);
  for (int k = 0; k < 10; ++k) {
    auto [next, d] = cusum_step(s, Vec6::Constant(double(k)), cfg);
    s = next;
  }
  REQUIRE(s.history.size() == 3);
  CHECK(s.history.back()(0) == 9.0);
  CHECK(s.history.front()(0) == 7.0);
}
