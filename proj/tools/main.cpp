#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "navguard/config.hpp"
#include "navguard/csvlog.hpp"
#include "navguard/errors.hpp"
#include "navguard/metrics.hpp"
#include "navguard/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_csv;
  std::string metrics_path;
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw navguard::Error(navguard::ErrorCode::IoError,
                          "cannot open \"" + path + "\" for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw navguard::Error(navguard::ErrorCode::IoError,
                          "failed writing \"" + path + "\"");
  }
}

int execute_run(navguard::ScenarioConfig cfg, const RunOptions& opts) {
  if (opts.seed) {
    cfg.seed = *opts.seed;
  }
  auto [log, metrics] = navguard::run_scenario(cfg);
  if (!opts.out_csv.empty()) {
    navguard::write_log_csv(log, opts.out_csv);
  }
  const std::string json = navguard::metrics_to_json(metrics);
  if (!opts.metrics_path.empty()) {
    write_text_file(opts.metrics_path, json);
  } else {
    std::cout << json;
  }
  return kExitOk;
}

void add_output_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Override the scenario seed");
  cmd->add_option("--out", opts.out_csv, "Write the per-step CSV log here");
  cmd->add_option("--metrics", opts.metrics_path,
                  "Write the metrics JSON here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attack-aware INS/GNSS fusion simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run = app.add_subcommand(
      "run", "Run one scenario from a config file");
  run->add_option("--config", run_opts.config_path, "Scenario config file")
      ->required();
  add_output_options(run, run_opts);

  std::string mc_config_path;
  long mc_runs = 0;
  std::optional<std::uint64_t> mc_seed_base;
  CLI::App* mc = app.add_subcommand(
      "montecarlo", "Run a seeded sweep and print the aggregate report");
  mc->add_option("--config", mc_config_path, "Scenario config file")
      ->required();
  mc->add_option("--runs", mc_runs, "Number of runs")->required();
  mc->add_option("--seed-base", mc_seed_base,
                 "First seed of the sweep (default: the config seed)");

  RunOptions fig6_opts;
  CLI::App* fig6 = app.add_subcommand(
      "paper-fig6",
      "Run the canned 10 m GNSS spoofing scenario (60 s, 10 Hz, step attack "
      "on the north position channel at 40 s)");
  add_output_options(fig6, fig6_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      return execute_run(navguard::load_config(run_opts.config_path),
                         run_opts);
    }
    if (mc->parsed()) {
      navguard::ScenarioConfig cfg = navguard::load_config(mc_config_path);
      const std::uint64_t seed_base = mc_seed_base.value_or(cfg.seed);
      const navguard::MonteCarloReport report =
          navguard::monte_carlo(cfg, mc_runs, seed_base);
      std::cout << navguard::report_to_json(report);
      return kExitOk;
    }
    return execute_run(navguard::paper_fig6_config(), fig6_opts);
  } catch (const navguard::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == navguard::ErrorCode::ConfigInvalid ? kExitConfigError
                                                          : kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
