#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rrsim/trace.hpp"
#include "rrsim/workload.hpp"

namespace rrsim {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  long count = 0;
};

// Service time of a task is t_start of its first exec interval minus its
// arrival, aggregated per priority level. Throws std::runtime_error when a
// task has no exec interval (incomplete run).
std::map<int, MeanStd> service_times(const std::vector<TraceEvent>& trace,
                                     const std::vector<Task>& tasks);

// Completed tasks divided by the time of the last completion; the experiment
// starts at t = 0. Throws std::runtime_error when nothing completed.
double throughput(const std::vector<TraceEvent>& trace);

// Quotient overhead of a variant against a baseline: 1 - variant/baseline.
// Positive means the variant is slower; negative values are allowed.
double overhead(double tp_baseline, double tp_variant);

struct SimCounters {
  int preemptions = 0;    // priority preemptions (victim re-enqueued)
  int partial_swaps = 0;  // partial reconfigurations issued
  int full_swaps = 0;     // full reconfigurations issued
  int evictions = 0;      // full-mode evictions (tasks resumed in place)
};

struct RunStats {
  std::map<int, MeanStd> service;  // per priority level
  double throughput_tps = 0.0;
  VirtualTime makespan;
  SimCounters counters;
};

RunStats run_stats(const std::vector<TraceEvent>& trace, const std::vector<Task>& tasks,
                   const SimCounters& counters);

// One results.csv row; a run contributes one row per priority level.
struct ResultRow {
  std::uint32_t seed = 0;
  std::string scenario;
  int regions = 0;
  std::string mode;
  bool preemption = false;
  int size = 0;
  int priority = 0;
  MeanStd service;
  double throughput_tps = 0.0;
  double makespan_s = 0.0;
  int n_preemptions = 0;
};

std::string results_csv_header();
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace rrsim
