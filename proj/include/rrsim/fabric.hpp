#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrsim/kernels.hpp"
#include "rrsim/simcore.hpp"
#include "rrsim/timing.hpp"
#include "rrsim/trace.hpp"
#include "rrsim/workload.hpp"

namespace rrsim {

enum class RegionStatus { free, running, reconfiguring, halted };

struct RegionState {
  int id = 0;
  std::optional<KernelId> loaded;
  RegionStatus status = RegionStatus::free;
  int current_task = -1;
  VirtualTime launch_time;  // when the current attempt was issued
  VirtualTime exec_start;   // launch_time plus restore latency when resumed
  VirtualTime completion_time;
  bool resumed = false;
  std::int64_t quanta_at_launch = 0;
  VirtualTime quantum;  // per-row duration for the current attempt
  std::uint64_t completion_event = 0;
  std::optional<KernelInstance> instance;
};

// Tokens standing in for bitstream files. Partial tokens are per kernel; full
// tokens are per region->kernel assignment and are generated lazily the first
// time an assignment is requested.
class BitstreamLibrary {
 public:
  const std::string& partial(KernelId id);
  const std::string& full(const std::vector<std::optional<KernelId>>& assignment);

 private:
  std::map<KernelId, std::string> partial_;
  std::map<std::string, std::string> full_;
};

// Simulated multi-region FPGA: per-region kernel state machines, the
// exclusive configuration port (FIFO-granted), per-region context banks, and
// the latency model. All interaction happens on the simulation thread via the
// engine's events.
class Fabric {
 public:
  Fabric(Engine& engine, TraceRecorder& trace, TimingModel timing, int n_regions,
         bool functional_kernels = false, std::uint32_t image_seed = 0);

  int n_regions() const { return static_cast<int>(regions_.size()); }
  const RegionState& region(int id) const { return regions_.at(id); }
  const TimingModel& timing() const { return timing_; }
  bool reconfig_in_flight() const { return reconfig_in_flight_; }
  BitstreamLibrary& bitstreams() { return bitstreams_; }

  void set_initial_kernel(int region, KernelId id);

  // Queues a partial reconfiguration on the exclusive port; requests are
  // granted FIFO. The region must be free and must not already hold the
  // requested kernel. ReconfigDone(region) fires when the swap completes.
  void request_partial_reconfig(int region, KernelId id);

  // Scheduler callback for ReconfigDone(region >= 0): installs the new kernel
  // and grants the next queued request.
  void complete_partial_reconfig(int region);

  // Whole-fabric reconfiguration followed by the setup phase. No region may
  // be running (the scheduler evicts them first) and the port must be idle.
  // All regions halt until ReconfigDone(full) at
  // start + t_full_reconfig + t_setup_fpga.
  void begin_full_reconfig(int requested_region,
                           const std::vector<std::optional<KernelId>>& assignment, VirtualTime start);

  // Scheduler callback for ReconfigDone(region < 0).
  void complete_full_reconfig();

  // Starts (or resumes) a task on a free region holding its kernel; `start`
  // may lie at or after now() so restores can be staggered. Returns the
  // completion time: start (+ t_ctx_restore if resumed) + remaining quanta *
  // quantum duration, exact in fixed-point time.
  VirtualTime launch(int region, Task& task, VirtualTime start);

  // Asynchronous halt at time `at`: progress truncates to the checkpoints
  // committed strictly before `at` (a halt inside the save window at the end
  // of a quantum tears that save, so the bank keeps the previous checkpoint
  // and valid drops to 0). Charges t_ctx_save, writes the context bank,
  // cancels the pending completion and frees the region. Used by priority
  // preemption and by full-reconfiguration evictions.
  Context halt_and_save(int region, Task& task, VirtualTime at);

  // Priority preemption entry point: halt_and_save(now) plus a
  // PreemptApplied(region) event once the save latency elapses.
  Context preempt(int region, Task& task);

  // KernelCompletion finalisation: records the exec interval, runs the
  // instance to its end and frees the region.
  void finish(int region, Task& task);

  void write_context_bank(int region, const Context& ctx);
  const Context& read_context_bank(int region) const;

  // Final output buffer of a completed task (functional mode only).
  const Image& output_of(int task_id) const;

 private:
  struct ReconfigRequest {
    int region;
    KernelId kernel;
  };

  RegionState& region_mut(int id);
  void try_start_next_reconfig();
  KernelInstance make_instance(const Task& task) const;

  Engine& engine_;
  TraceRecorder& trace_;
  TimingModel timing_;
  bool functional_kernels_;
  std::uint32_t image_seed_;
  std::vector<RegionState> regions_;
  std::vector<std::optional<Context>> banks_;
  std::unordered_map<int, KernelInstance> suspended_;
  std::unordered_map<int, Image> outputs_;
  BitstreamLibrary bitstreams_;

  std::deque<ReconfigRequest> icap_queue_;
  bool reconfig_in_flight_ = false;
  std::optional<ReconfigRequest> active_partial_;
  std::vector<std::optional<KernelId>> full_assignment_;
};

}  // namespace rrsim
