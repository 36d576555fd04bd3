#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rrsim/experiment.hpp"
#include "rrsim/trace.hpp"
#include "rrsim/workload.hpp"

using namespace rrsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config(const std::string& out) {
  ExperimentConfig cfg;
  cfg.seeds = {28871727u};
  cfg.scenarios = {"busy"};
  cfg.sizes = {200, 300};
  cfg.out_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("scenario presets") {
  CHECK(scenario_window_minutes("busy") == 0.1);
  CHECK(scenario_window_minutes("medium") == 0.5);
  CHECK(scenario_window_minutes("idle") == 0.8);
  CHECK_THROWS_AS(scenario_window_minutes("frantic"), std::invalid_argument);
}

TEST_CASE("defaults carry the ten study seeds and the size sweep") {
  ExperimentConfig cfg;
  CHECK(cfg.seeds.size() == 10);
  CHECK(cfg.seeds.front() == 28871727u);
  CHECK(cfg.sizes == std::vector<int>{200, 300, 400, 500, 600});
  CHECK(cfg.n_tasks == 30);
  CHECK(cfg.regions == 2);
}

TEST_CASE("one seed, busy, two sizes: five priority rows per size") {
  TempDir dir("rrsim_exp_rows");
  run_experiment(small_config(dir.path.string()));

  const std::string csv = slurp(dir.path / "results.csv");
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  REQUIRE(std::getline(lines, line));
  CHECK(line == results_csv_header());
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 10);  // 2 sizes x 5 priorities

  CHECK(fs::exists(dir.path / "trace_s28871727_busy_sz200_r2_partial_pon.json"));
  CHECK(fs::exists(dir.path / "trace_s28871727_busy_sz300_r2_partial_pon.json"));
}

TEST_CASE("the same invocation twice is byte-identical") {
  TempDir a("rrsim_exp_det_a");
  TempDir b("rrsim_exp_det_b");
  run_experiment(small_config(a.path.string()));
  run_experiment(small_config(b.path.string()));
  CHECK(slurp(a.path / "results.csv") == slurp(b.path / "results.csv"));
  CHECK(slurp(a.path / "trace_s28871727_busy_sz200_r2_partial_pon.json") ==
        slurp(b.path / "trace_s28871727_busy_sz200_r2_partial_pon.json"));
}

TEST_CASE("config json applies known keys and rejects unknown ones") {
  ExperimentConfig cfg;
  nlohmann::json obj = {
      {"seeds", {1, 2, 3}},
      {"scenario", "medium"},
      {"sizes", {100}},
      {"tasks", 5},
      {"regions", 1},
      {"mode", "full"},
      {"preemption", false},
      {"t_partial_reconfig", 0.010},
      {"cycles_per_pixel", {{"Gauss1", 12}}},
  };
  apply_config_json(cfg, obj);
  CHECK(cfg.seeds == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(cfg.scenarios == std::vector<std::string>{"medium"});
  CHECK(cfg.sizes == std::vector<int>{100});
  CHECK(cfg.n_tasks == 5);
  CHECK(cfg.regions == 1);
  CHECK(cfg.mode == ReconfigMode::full);
  CHECK_FALSE(cfg.preemption);
  CHECK(cfg.timing.t_partial_reconfig == VirtualTime::from_ns(10'000'000));
  CHECK(cfg.timing.cycles_per_pixel.at(KernelId::Gauss1) == 12);

  nlohmann::json bad = {{"speeds", {1}}};
  ExperimentConfig fresh;
  CHECK_THROWS_WITH_AS(apply_config_json(fresh, bad), doctest::Contains("unknown key"),
                       std::invalid_argument);

  nlohmann::json bad_mode = {{"mode", "medium"}};
  CHECK_THROWS_AS(apply_config_json(fresh, bad_mode), std::invalid_argument);
}

TEST_CASE("replaying a dumped workload reproduces the generated run") {
  TempDir dir("rrsim_exp_replay");
  fs::create_directories(dir.path);

  WorkloadSpec spec;
  spec.t_max_minutes = 0.1;
  spec.image_size = 200;
  auto tasks = generate_workload(spec, 28871727u);
  const auto workload_path = dir.path / "workload.json";
  save_workload(workload_path.string(), tasks);

  ExperimentConfig generated = small_config((dir.path / "gen").string());
  generated.sizes = {200};
  run_experiment(generated);

  ExperimentConfig replay = small_config((dir.path / "rep").string());
  replay.replay_path = workload_path.string();
  run_experiment(replay);

  auto direct = load_trace((dir.path / "gen" / "trace_s28871727_busy_sz200_r2_partial_pon.json").string());
  auto replayed = load_trace((dir.path / "rep" / "trace_replay.json").string());
  CHECK(direct == replayed);
}

TEST_CASE("combo stats expose throughput and makespan consistently") {
  ExperimentConfig cfg = small_config("unused");
  auto outcome = run_combo(28871727u, "busy", 200, cfg);
  CHECK(outcome.stats.throughput_tps ==
        doctest::Approx(30.0 / outcome.stats.makespan.seconds()));
  CHECK(outcome.stats.makespan > VirtualTime{});
}
