#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navguard/scenario.hpp"

namespace navguard {

// Aggregate of a seeded sweep. Delay statistics cover the runs that
// detected their attack; miss_rate is the fraction of runs with a
// configured attack but no alarm at or after onset.
struct MonteCarloReport {
  long runs = 0;
  std::uint64_t seed_base = 0;
  std::vector<Metrics> per_run;
  long detected_runs = 0;
  double miss_rate = 0.0;
  std::optional<long> delay_min;
  std::optional<double> delay_median;
  std::optional<long> delay_max;
  long false_alarm_total = 0;
  double false_alarms_per_hour = 0.0;
};

// Runs `runs` scenarios with seeds seed_base .. seed_base + runs - 1,
// sequentially. Per-run failures are rethrown with the run index and seed.
MonteCarloReport monte_carlo(const ScenarioConfig& cfg, long runs,
                             std::uint64_t seed_base);

// Flat JSON documents for the CLI outputs.
std::string metrics_to_json(const Metrics& metrics);
std::string report_to_json(const MonteCarloReport& report);

}  // namespace navguard
