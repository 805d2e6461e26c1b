#include "navguard/metrics.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"

#include "navguard/errors.hpp"

namespace navguard {

namespace {

nlohmann::json metrics_json_object(const Metrics& m) {
  nlohmann::json j;
  j["detection_delay_steps"] =
      m.detection_delay_steps ? nlohmann::json(*m.detection_delay_steps)
                              : nlohmann::json(nullptr);
  j["false_alarm_count"] = m.false_alarm_count;
  j["position_rmse"] = m.position_rmse;
  j["alarm_times"] = m.alarm_times;
  return j;
}

}  // namespace

MonteCarloReport monte_carlo(const ScenarioConfig& cfg, long runs,
                             std::uint64_t seed_base) {
  if (runs < 1) {
    throw Error(ErrorCode::ConfigInvalid, "montecarlo runs must be >= 1");
  }
  MonteCarloReport report;
  report.runs = runs;
  report.seed_base = seed_base;
  report.per_run.reserve(static_cast<std::size_t>(runs));
  std::vector<long> delays;
  long missed = 0;
  for (long i = 0; i < runs; ++i) {
    ScenarioConfig run_cfg = cfg;
    run_cfg.seed = seed_base + static_cast<std::uint64_t>(i);
    try {
      auto [log, metrics] = run_scenario(run_cfg);
      (void)log;
      report.false_alarm_total += metrics.false_alarm_count;
      if (metrics.detection_delay_steps) {
        delays.push_back(*metrics.detection_delay_steps);
      } else if (cfg.attack) {
        ++missed;
      }
      report.per_run.push_back(std::move(metrics));
    } catch (const Error& e) {
      throw Error(e.code(), "run " + std::to_string(i) + " (seed " +
                                std::to_string(run_cfg.seed) + "): " +
                                e.what());
    }
  }
  report.detected_runs = static_cast<long>(delays.size());
  report.miss_rate =
      static_cast<double>(missed) / static_cast<double>(runs);
  if (!delays.empty()) {
    std::sort(delays.begin(), delays.end());
    report.delay_min = delays.front();
    report.delay_max = delays.back();
    const std::size_t mid = delays.size() / 2;
    report.delay_median =
        delays.size() % 2 == 1
            ? static_cast<double>(delays[mid])
            : 0.5 * static_cast<double>(delays[mid - 1] + delays[mid]);
  }
  const double hours =
      static_cast<double>(runs) * cfg.duration / 3600.0;
  report.false_alarms_per_hour =
      hours > 0.0 ? static_cast<double>(report.false_alarm_total) / hours
                  : 0.0;
  return report;
}

std::string metrics_to_json(const Metrics& metrics) {
  return metrics_json_object(metrics).dump(2) + "\n";
}

std::string report_to_json(const MonteCarloReport& report) {
  nlohmann::json j;
  j["runs"] = report.runs;
  j["seed_base"] = report.seed_base;
  j["detected_runs"] = report.detected_runs;
  j["miss_rate"] = report.miss_rate;
  j["delay_min"] = report.delay_min ? nlohmann::json(*report.delay_min)
                                    : nlohmann::json(nullptr);
  j["delay_median"] = report.delay_median
                          ? nlohmann::json(*report.delay_median)
                          : nlohmann::json(nullptr);
  j["delay_max"] = report.delay_max ? nlohmann::json(*report.delay_max)
                                    : nlohmann::json(nullptr);
  j["false_alarm_total"] = report.false_alarm_total;
  j["false_alarms_per_hour"] = report.false_alarms_per_hour;
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_run.size(); ++i) {
    nlohmann::json r = metrics_json_object(report.per_run[i]);
    r["seed"] = report.seed_base + i;
    runs.push_back(std::move(r));
  }
  j["per_run"] = std::move(runs);
  return j.dump(2) + "\n";
}

}  // namespace navguard
