#include "rrsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "rrsim/trace.hpp"

namespace rrsim {

double scenario_window_minutes(const std::string& name) {
  if (name == "busy") return 0.1;
  if (name == "medium") return 0.5;
  if (name == "idle") return 0.8;
  throw std::invalid_argument("unknown scenario '" + name + "' (expected busy, medium or idle)");
}

namespace {

ReconfigMode parse_mode(const std::string& s) {
  if (s == "partial") return ReconfigMode::partial;
  if (s == "full") return ReconfigMode::full;
  throw std::invalid_argument("mode must be 'partial' or 'full', got '" + s + "'");
}

std::string format_minutes(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

double window_minutes(const std::string& scenario, const ExperimentConfig& cfg) {
  if (cfg.explicit_t_minutes) return *cfg.explicit_t_minutes;
  return scenario_window_minutes(scenario);
}

std::string scenario_label(const std::string& scenario, const ExperimentConfig& cfg) {
  if (cfg.explicit_t_minutes) return "T" + format_minutes(*cfg.explicit_t_minutes);
  return scenario;
}

SimOptions sim_options(const ExperimentConfig& cfg) {
  SimOptions opts;
  opts.sched.mode = cfg.mode;
  opts.sched.preemption = cfg.preemption;
  opts.sched.n_regions = cfg.regions;
  opts.sched.requeue_front = cfg.requeue_front;
  opts.timing = cfg.timing;
  return opts;
}

std::vector<ResultRow> combo_rows(std::uint32_t seed, const std::string& label, int size,
                                  const ExperimentConfig& cfg, const RunStats& stats,
                                  int priority_levels) {
  std::vector<ResultRow> rows;
  for (int p = 0; p < priority_levels; ++p) {
    ResultRow row;
    row.seed = seed;
    row.scenario = label;
    row.regions = cfg.regions;
    row.mode = cfg.mode == ReconfigMode::partial ? "partial" : "full";
    row.preemption = cfg.preemption;
    row.size = size;
    row.priority = p;
    if (auto it = stats.service.find(p); it != stats.service.end()) {
      row.service = it->second;
    }
    row.throughput_tps = stats.throughput_tps;
    row.makespan_s = stats.makespan.seconds();
    row.n_preemptions = stats.counters.preemptions;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void apply_config_json(ExperimentConfig& cfg, const nlohmann::json& obj) {
  if (!obj.is_object()) {
    throw std::invalid_argument("config: expected a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (key == "seeds") {
      cfg.seeds = value.get<std::vector<std::uint32_t>>();
    } else if (key == "scenario") {
      if (value.is_string()) {
        cfg.scenarios = {value.get<std::string>()};
      } else {
        cfg.scenarios = value.get<std::vector<std::string>>();
      }
      for (const auto& s : cfg.scenarios) scenario_window_minutes(s);
    } else if (key == "T") {
      cfg.explicit_t_minutes = value.get<double>();
    } else if (key == "sizes") {
      cfg.sizes = value.get<std::vector<int>>();
    } else if (key == "tasks") {
      cfg.n_tasks = value.get<int>();
    } else if (key == "regions") {
      cfg.regions = value.get<int>();
    } else if (key == "mode") {
      cfg.mode = parse_mode(value.get<std::string>());
    } else if (key == "preemption") {
      cfg.preemption = value.get<bool>();
    } else if (key == "requeue_front") {
      cfg.requeue_front = value.get<bool>();
    } else if (key == "out") {
      cfg.out_dir = value.get<std::string>();
    } else if (key == "replay") {
      cfg.replay_path = value.get<std::string>();
    } else if (TimingModel::is_timing_key(key)) {
      cfg.timing.apply_json(obj, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.timing.validate();
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file " + path);
  }
  nlohmann::json obj = nlohmann::json::parse(in);
  apply_config_json(cfg, obj);
}

std::string trace_file_name(std::uint32_t seed, const std::string& scenario, int size,
                            const ExperimentConfig& cfg) {
  return "trace_s" + std::to_string(seed) + "_" + scenario_label(scenario, cfg) + "_sz" +
         std::to_string(size) + "_r" + std::to_string(cfg.regions) + "_" +
         (cfg.mode == ReconfigMode::partial ? "partial" : "full") +
         (cfg.preemption ? "_pon" : "_poff") + ".json";
}

ComboOutcome run_combo(std::uint32_t seed, const std::string& scenario, int size,
                       const ExperimentConfig& cfg) {
  WorkloadSpec spec;
  spec.n_tasks = cfg.n_tasks;
  spec.t_max_minutes = window_minutes(scenario, cfg);
  spec.image_size = size;
  SimResult sim = simulate(generate_workload(spec, seed), sim_options(cfg));
  ComboOutcome out;
  out.stats = run_stats(sim.trace, sim.tasks, sim.counters);
  out.tasks = std::move(sim.tasks);
  out.trace = std::move(sim.trace);
  return out;
}

void run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  }

  std::vector<ResultRow> rows;

  if (cfg.replay_path) {
    std::vector<Task> tasks = load_workload(*cfg.replay_path);
    std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
      if (a.arrival != b.arrival) return a.arrival < b.arrival;
      return a.id < b.id;
    });
    SimResult sim = simulate(std::move(tasks), sim_options(cfg));
    RunStats stats = run_stats(sim.trace, sim.tasks, sim.counters);
    int size = sim.tasks.empty() ? 0 : sim.tasks.front().size;
    for (const auto& t : sim.tasks) {
      if (t.size != size) size = 0;  // mixed sizes in a replayed workload
    }
    int levels = 1;
    for (const auto& t : sim.tasks) levels = std::max(levels, t.priority + 1);
    ExperimentConfig row_cfg = cfg;
    auto combo = combo_rows(0, "replay", size, row_cfg, stats, levels);
    rows.insert(rows.end(), combo.begin(), combo.end());
    save_trace((fs::path(cfg.out_dir) / "trace_replay.json").string(), sim.trace);
  } else {
    for (std::uint32_t seed : cfg.seeds) {
      for (const auto& scenario : cfg.scenarios) {
        for (int size : cfg.sizes) {
          ComboOutcome outcome = run_combo(seed, scenario, size, cfg);
          auto combo = combo_rows(seed, scenario_label(scenario, cfg), size, cfg, outcome.stats, 5);
          rows.insert(rows.end(), combo.begin(), combo.end());
          save_trace((fs::path(cfg.out_dir) / trace_file_name(seed, scenario, size, cfg)).string(),
                     outcome.trace);
        }
      }
    }
  }

  std::ofstream csv(fs::path(cfg.out_dir) / "results.csv", std::ios::binary | std::ios::trunc);
  if (!csv) {
    throw std::runtime_error("cannot open results.csv in " + cfg.out_dir);
  }
  write_results_csv(csv, rows);
}

}  // namespace rrsim
