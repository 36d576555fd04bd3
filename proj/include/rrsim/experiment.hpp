#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrsim/metrics.hpp"
#include "rrsim/scheduler.hpp"
#include "rrsim/timing.hpp"

namespace rrsim {

// The ten Tausworthe seeds of the study.
inline constexpr std::array<std::uint32_t, 10> kDefaultSeeds = {
    28871727u,   1368297677u, 3968565823u, 1120249751u, 3706141637u,
    1838770479u, 980516246u,  407297508u,  3820789643u, 1227911765u};

// Arrival-window presets in minutes: busy, medium and idle scenarios.
double scenario_window_minutes(const std::string& name);

struct ExperimentConfig {
  std::vector<std::uint32_t> seeds{kDefaultSeeds.begin(), kDefaultSeeds.end()};
  std::vector<std::string> scenarios = {"busy"};
  std::optional<double> explicit_t_minutes;  // overrides the scenario presets
  std::vector<int> sizes = {200, 300, 400, 500, 600};
  int n_tasks = 30;
  int regions = 2;
  ReconfigMode mode = ReconfigMode::partial;
  bool preemption = true;
  bool requeue_front = true;
  TimingModel timing;
  std::string out_dir = "out";
  std::optional<std::string> replay_path;
};

// Applies a JSON config object; unknown keys are usage errors
// (std::invalid_argument).
void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& obj);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// Deterministic name for one combination's trace file.
std::string trace_file_name(std::uint32_t seed, const std::string& scenario, int size,
                            const ExperimentConfig& cfg);

// Simulates one (seed, scenario, size) combination and returns its stats.
struct ComboOutcome {
  std::vector<Task> tasks;
  std::vector<TraceEvent> trace;
  RunStats stats;
};
ComboOutcome run_combo(std::uint32_t seed, const std::string& scenario, int size,
                       const ExperimentConfig& cfg);

// Runs the full sweep (or a replay), writing one trace JSON per combination
// plus results.csv with five priority rows per combination into cfg.out_dir.
// Outputs are byte-deterministic for a given config.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace rrsim
