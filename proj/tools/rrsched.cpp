// Experiment runner: sweeps randomly generated image-filter workloads over
// the simulated reconfigurable fabric and writes per-combination trace JSON
// plus results.csv. Flags override the config file, which overrides the
// built-in defaults.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrsim/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Preemptive FCFS scheduling simulator for a partially reconfigurable fabric"};

  std::vector<std::uint32_t> seeds;
  std::vector<std::string> scenarios;
  double t_minutes = 0.0;
  std::vector<int> sizes;
  int tasks = 0;
  int regions = 0;
  std::string mode;
  std::string preemption;
  std::string config_path;
  std::string out_dir;
  std::string replay_path;

  auto* seeds_opt = app.add_option("--seeds", seeds, "Tausworthe seeds (default: the 10 study seeds)");
  auto* scenario_opt =
      app.add_option("--scenario", scenarios, "Arrival scenario: busy, medium or idle (repeatable)")
          ->check(CLI::IsMember({"busy", "medium", "idle"}));
  auto* t_opt = app.add_option("--T", t_minutes, "Explicit arrival window in minutes");
  auto* sizes_opt = app.add_option("--sizes", sizes, "Image side lengths (default 200..600)");
  auto* tasks_opt = app.add_option("--tasks", tasks, "Tasks per run (default 30)");
  auto* regions_opt = app.add_option("--regions", regions, "Reconfigurable regions (default 2)");
  auto* mode_opt = app.add_option("--mode", mode, "Reconfiguration mode")
                       ->check(CLI::IsMember({"partial", "full"}));
  auto* preempt_opt =
      app.add_option("--preemption", preemption, "Preemptive scheduling")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (default ./out)");
  auto* replay_opt = app.add_option("--replay", replay_path, "Replay a workload JSON instead of generating");

  CLI11_PARSE(app, argc, argv);

  try {
    rrsim::ExperimentConfig cfg;
    if (!config_path.empty()) {
      rrsim::apply_config_file(cfg, config_path);
    }
    if (seeds_opt->count() > 0) cfg.seeds = seeds;
    if (scenario_opt->count() > 0) cfg.scenarios = scenarios;
    if (t_opt->count() > 0) cfg.explicit_t_minutes = t_minutes;
    if (sizes_opt->count() > 0) cfg.sizes = sizes;
    if (tasks_opt->count() > 0) cfg.n_tasks = tasks;
    if (regions_opt->count() > 0) cfg.regions = regions;
    if (mode_opt->count() > 0) cfg.mode = mode == "full" ? rrsim::ReconfigMode::full : rrsim::ReconfigMode::partial;
    if (preempt_opt->count() > 0) cfg.preemption = preemption == "on";
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    if (replay_opt->count() > 0) cfg.replay_path = replay_path;

    rrsim::run_experiment(cfg);
    std::cout << "results written to " << cfg.out_dir << "/results.csv\n";
  } catch (const std::exception& e) {
    std::cerr << "rrsched: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
