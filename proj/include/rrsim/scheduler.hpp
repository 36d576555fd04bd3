#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "rrsim/fabric.hpp"
#include "rrsim/metrics.hpp"
#include "rrsim/simcore.hpp"
#include "rrsim/timing.hpp"
#include "rrsim/workload.hpp"

namespace rrsim {

enum class ReconfigMode { partial, full };

struct SchedulerConfig {
  ReconfigMode mode = ReconfigMode::partial;
  bool preemption = true;
  int n_regions = 2;
  // Preempted tasks re-enter at the front of their priority level so partly
  // completed work is not starved by same-priority later arrivals.
  bool requeue_front = true;
};

// One FIFO queue per priority level, 0 highest. dequeue_highest returns the
// front of the lowest-numbered non-empty level.
class PriorityQueues {
 public:
  explicit PriorityQueues(int levels);

  void enqueue_back(int task, int priority);
  void enqueue_front(int task, int priority);
  std::optional<int> dequeue_highest();
  std::optional<int> top_priority() const;
  bool empty() const;
  std::size_t size() const;

 private:
  std::vector<std::deque<int>> levels_;
};

struct SimOptions {
  SchedulerConfig sched;
  TimingModel timing;
  // Functional instances carry pixel buffers; timing-only instances are the
  // default for experiment sweeps since pixel content cannot influence the
  // schedule.
  bool functional_kernels = false;
  std::uint32_t image_seed = 0;
  std::vector<std::pair<int, KernelId>> initial_kernels;  // region -> preloaded kernel
};

struct SimResult {
  std::vector<TraceEvent> trace;
  std::vector<Task> tasks;
  SimCounters counters;
  VirtualTime makespan;
  std::map<int, Image> outputs;  // per task, functional mode only
};

// Runs the FCFS preemptive priority scheduler over a workload (sorted by
// arrival) until every task completes. Deterministic: identical tasks and
// options give an identical trace. Internal invariant breaches (work
// conservation, priority safety) abort with a diagnostic.
SimResult simulate(std::vector<Task> tasks, const SimOptions& opts);

}  // namespace rrsim
