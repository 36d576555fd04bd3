#include "rrsim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace rrsim {

PriorityQueues::PriorityQueues(int levels) {
  if (levels < 1) {
    throw std::invalid_argument("priority queues need at least one level");
  }
  levels_.resize(static_cast<std::size_t>(levels));
}

void PriorityQueues::enqueue_back(int task, int priority) {
  levels_.at(static_cast<std::size_t>(priority)).push_back(task);
}

void PriorityQueues::enqueue_front(int task, int priority) {
  levels_.at(static_cast<std::size_t>(priority)).push_front(task);
}

std::optional<int> PriorityQueues::dequeue_highest() {
  for (auto& level : levels_) {
    if (!level.empty()) {
      int task = level.front();
      level.pop_front();
      return task;
    }
  }
  return std::nullopt;
}

std::optional<int> PriorityQueues::top_priority() const {
  for (std::size_t p = 0; p < levels_.size(); ++p) {
    if (!levels_[p].empty()) return static_cast<int>(p);
  }
  return std::nullopt;
}

bool PriorityQueues::empty() const {
  for (const auto& level : levels_) {
    if (!level.empty()) return false;
  }
  return true;
}

std::size_t PriorityQueues::size() const {
  std::size_t n = 0;
  for (const auto& level : levels_) n += level.size();
  return n;
}

namespace {

// Per-region scheduler bookkeeping layered over the fabric state: a reserved
// region is committed to a pending task while its preempt save, swap or
// parked full reconfiguration is in flight.
struct Reservation {
  enum class Stage {
    none,
    await_preempt,  // victim context save in flight
    await_swap,     // partial reconfiguration in flight or queued on the port
    await_full,     // full reconfiguration in flight for this region's task
    parked_full,    // full reconfiguration waiting for quiescence or the port
    deferred_full,  // handover blocked while a full reconfiguration halts the region
  };
  Stage stage = Stage::none;
  int task = -1;
};

class Scheduler {
 public:
  Scheduler(Engine& engine, Fabric& fabric, std::vector<Task>& tasks, const SchedulerConfig& cfg)
      : engine_(engine), fabric_(fabric), tasks_(tasks), cfg_(cfg), queues_(queue_levels(tasks)) {
    reservations_.resize(static_cast<std::size_t>(fabric_.n_regions()));
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      if (!index_.emplace(tasks_[i].id, i).second) {
        throw std::invalid_argument("scheduler: duplicate task id " + std::to_string(tasks_[i].id));
      }
    }
  }

  static int queue_levels(const std::vector<Task>& tasks) {
    int levels = 1;
    for (const auto& t : tasks) {
      if (t.priority < 0) {
        throw std::invalid_argument("scheduler: negative task priority");
      }
      levels = std::max(levels, t.priority + 1);
    }
    return levels;
  }

  void schedule_arrivals() {
    // Equal-time arrivals dispatch in task-id order, one loop iteration each.
    for (const auto& t : tasks_) {
      engine_.schedule(t.arrival, EventKind::TaskArrival, t.id, -1);
    }
  }

  void handle(const Event& ev) {
    switch (ev.kind) {
      case EventKind::TaskArrival:
        serve(task(ev.task));
        break;
      case EventKind::KernelCompletion:
        on_completion(ev.region);
        break;
      case EventKind::ReconfigDone:
        if (ev.region >= 0) {
          on_partial_done(ev.region);
        } else {
          on_full_done();
        }
        break;
      case EventKind::PreemptApplied:
        on_preempt_applied(ev.region);
        break;
    }
    rebalance();
    check_invariants();
  }

  const SimCounters& counters() const { return counters_; }
  long completed() const { return completed_; }

 private:
  Task& task(int id) {
    auto it = index_.find(id);
    if (it == index_.end()) {
      throw std::logic_error("scheduler: unknown task id " + std::to_string(id));
    }
    return tasks_[it->second];
  }

  bool reserved(int region) const {
    return reservations_[static_cast<std::size_t>(region)].stage != Reservation::Stage::none;
  }

  int pick_free_region() const {
    for (int r = 0; r < fabric_.n_regions(); ++r) {
      if (fabric_.region(r).status == RegionStatus::free && !reserved(r)) return r;
    }
    return -1;
  }

  // Region running a strictly lower-priority (numerically greater) task whose
  // exec has actually begun; among candidates the lowest-priority occupant
  // wins, ties to the lowest region id. Regions whose restore is still in
  // flight are left alone, as are kernels whose completion interrupt is
  // already due at this instant.
  int pick_victim(int incoming_priority) const {
    int best = -1;
    int best_priority = incoming_priority;
    for (int r = 0; r < fabric_.n_regions(); ++r) {
      const RegionState& region = fabric_.region(r);
      if (region.status != RegionStatus::running) continue;
      if (region.exec_start > engine_.now()) continue;
      if (region.completion_time <= engine_.now()) continue;
      const int p = tasks_[index_.at(region.current_task)].priority;
      if (p > best_priority) {
        best = r;
        best_priority = p;
      }
    }
    return best;
  }

  void enqueue_task(Task& t, bool front) {
    if (front) {
      queues_.enqueue_front(t.id, t.priority);
    } else {
      queues_.enqueue_back(t.id, t.priority);
    }
    t.state = TaskState::queued;
  }

  // The four-step serve procedure.
  void serve(Task& t) {
    const int free = pick_free_region();
    if (free >= 0) {
      assign(free, t);
      return;
    }
    if (cfg_.preemption) {
      const int victim_region = pick_victim(t.priority);
      if (victim_region >= 0) {
        do_preempt(victim_region, t);
        return;
      }
    }
    enqueue_task(t, false);
  }

  // Steps 3 and 4: swap if the loaded kernel differs, then launch.
  void assign(int region, Task& t) {
    auto& res = reservations_[static_cast<std::size_t>(region)];
    if (fabric_.region(region).loaded == std::optional<KernelId>(t.kernel)) {
      res = Reservation{};
      fabric_.launch(region, t, engine_.now());
      return;
    }
    if (cfg_.mode == ReconfigMode::partial) {
      res = Reservation{Reservation::Stage::await_swap, t.id};
      fabric_.request_partial_reconfig(region, t.kernel);
      ++counters_.partial_swaps;
      return;
    }
    initiate_full(region, t);
  }

  void do_preempt(int region, Task& incoming) {
    Task& victim = task(fabric_.region(region).current_task);
    fabric_.preempt(region, victim);
    ++counters_.preemptions;
    enqueue_task(victim, cfg_.requeue_front);
    reservations_[static_cast<std::size_t>(region)] =
        Reservation{Reservation::Stage::await_preempt, incoming.id};
  }

  void initiate_full(int region, Task& t) {
    auto& res = reservations_[static_cast<std::size_t>(region)];
    bool must_wait = fabric_.reconfig_in_flight();
    if (!cfg_.preemption) {
      for (int r = 0; r < fabric_.n_regions(); ++r) {
        if (r != region && fabric_.region(r).status == RegionStatus::running) must_wait = true;
      }
    }
    if (must_wait) {
      // Without checkpoint support there is no state to save, so the swap
      // waits for the fabric to drain (and the port to free) first.
      res = Reservation{Reservation::Stage::parked_full, t.id};
      parked_.push_back(region);
      return;
    }
    start_full(region, t);
  }

  void start_full(int region, Task& t) {
    reservations_[static_cast<std::size_t>(region)] =
        Reservation{Reservation::Stage::await_full, t.id};
    // Evict every other running kernel first. The reset signals land now; the
    // per-region banks take their saves concurrently. A kernel whose
    // completion interrupt is due at this very instant is finished, not
    // evicted.
    full_evicted_.clear();
    bool any_evicted = false;
    for (int r = 0; r < fabric_.n_regions(); ++r) {
      if (r == region) continue;
      if (fabric_.region(r).status != RegionStatus::running) continue;
      Task& victim = task(fabric_.region(r).current_task);
      if (fabric_.region(r).completion_time <= engine_.now()) {
        fabric_.finish(r, victim);
        ++completed_;
        continue;
      }
      fabric_.halt_and_save(r, victim, engine_.now());
      any_evicted = true;
      full_evicted_.push_back({r, victim.id});
      ++counters_.evictions;
    }
    std::vector<std::optional<KernelId>> assignment(static_cast<std::size_t>(fabric_.n_regions()));
    for (int r = 0; r < fabric_.n_regions(); ++r) {
      assignment[static_cast<std::size_t>(r)] =
          r == region ? std::optional<KernelId>(t.kernel) : fabric_.region(r).loaded;
    }
    const VirtualTime start =
        any_evicted ? engine_.now() + fabric_.timing().t_ctx_save : engine_.now();
    fabric_.begin_full_reconfig(region, assignment, start);
    ++counters_.full_swaps;
    full_region_ = region;
  }

  // When a reservation is about to be honoured, a strictly higher-priority
  // task that queued up in the meantime takes the slot instead; the displaced
  // task returns to the front of its level.
  void maybe_handoff(int region) {
    if (!cfg_.preemption) return;
    auto& res = reservations_[static_cast<std::size_t>(region)];
    Task& pending = task(res.task);
    const auto top = queues_.top_priority();
    if (top && *top < pending.priority) {
      const int taken = *queues_.dequeue_highest();
      enqueue_task(pending, true);
      res.task = taken;
    }
  }

  void on_completion(int region) {
    Task& t = task(fabric_.region(region).current_task);
    fabric_.finish(region, t);
    ++completed_;
    try_start_parked();
  }

  void on_partial_done(int region) {
    fabric_.complete_partial_reconfig(region);
    auto& res = reservations_[static_cast<std::size_t>(region)];
    if (res.stage != Reservation::Stage::await_swap) {
      throw std::logic_error("scheduler: ReconfigDone for region without a pending swap");
    }
    maybe_handoff(region);
    assign(region, task(res.task));
  }

  void on_full_done() {
    fabric_.complete_full_reconfig();
    auto& res = reservations_[static_cast<std::size_t>(full_region_)];
    if (res.stage != Reservation::Stage::await_full) {
      throw std::logic_error("scheduler: full ReconfigDone without a pending request");
    }
    // Evicted kernels resume in place, never through the queues; their
    // context copies serialise on the host, the incoming task launches last.
    VirtualTime at = engine_.now();
    for (const auto& [region, task_id] : full_evicted_) {
      fabric_.launch(region, task(task_id), at);
      at += fabric_.timing().t_ctx_restore;
    }
    full_evicted_.clear();
    Task& incoming = task(res.task);
    res = Reservation{};
    const int region = full_region_;
    full_region_ = -1;
    fabric_.launch(region, incoming, at);
    for (int r = 0; r < fabric_.n_regions(); ++r) {
      auto& blocked = reservations_[static_cast<std::size_t>(r)];
      if (blocked.stage == Reservation::Stage::deferred_full) {
        maybe_handoff(r);
        assign(r, task(blocked.task));
      }
    }
    try_start_parked();
  }

  void on_preempt_applied(int region) {
    auto& res = reservations_[static_cast<std::size_t>(region)];
    if (res.stage != Reservation::Stage::await_preempt) {
      throw std::logic_error("scheduler: PreemptApplied for region without a pending preempt");
    }
    if (fabric_.region(region).status != RegionStatus::free) {
      // A full reconfiguration halted this region while the save completed;
      // the handover resumes once the fabric comes back.
      res.stage = Reservation::Stage::deferred_full;
      return;
    }
    maybe_handoff(region);
    assign(region, task(res.task));
  }

  void try_start_parked() {
    while (!parked_.empty()) {
      const int region = parked_.front();
      if (fabric_.reconfig_in_flight()) return;
      if (!cfg_.preemption) {
        for (int r = 0; r < fabric_.n_regions(); ++r) {
          if (r != region && fabric_.region(r).status == RegionStatus::running) return;
        }
      }
      parked_.pop_front();
      maybe_handoff(region);
      start_full(region, task(reservations_[static_cast<std::size_t>(region)].task));
    }
  }

  void rebalance() {
    // Completion path of the main loop: free regions are refilled from the
    // queues before time advances.
    while (true) {
      const int region = pick_free_region();
      if (region < 0) break;
      const auto tid = queues_.dequeue_highest();
      if (!tid) break;
      assign(region, task(*tid));
    }
    if (!cfg_.preemption) return;
    while (true) {
      const auto top = queues_.top_priority();
      if (!top) break;
      const int victim_region = pick_victim(*top);
      if (victim_region < 0) break;
      const int tid = *queues_.dequeue_highest();
      do_preempt(victim_region, task(tid));
    }
  }

  void check_invariants() {
    if (!queues_.empty() && pick_free_region() >= 0) {
      throw std::logic_error("scheduler invariant breach: free region with a non-empty queue at t=" +
                             std::to_string(engine_.now().ns()) + "ns");
    }
    if (cfg_.preemption) {
      const auto top = queues_.top_priority();
      if (top && pick_victim(*top) >= 0) {
        throw std::logic_error(
            "scheduler invariant breach: lower-priority task running while priority " +
            std::to_string(*top) + " waits at t=" + std::to_string(engine_.now().ns()) + "ns");
      }
    }
  }

  Engine& engine_;
  Fabric& fabric_;
  std::vector<Task>& tasks_;
  SchedulerConfig cfg_;
  PriorityQueues queues_;
  std::unordered_map<int, std::size_t> index_;
  std::vector<Reservation> reservations_;
  std::deque<int> parked_;
  std::vector<std::pair<int, int>> full_evicted_;  // region, task
  int full_region_ = -1;
  SimCounters counters_;
  long completed_ = 0;
};

}  // namespace

SimResult simulate(std::vector<Task> tasks, const SimOptions& opts) {
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    if (tasks[i].arrival < tasks[i - 1].arrival) {
      throw std::invalid_argument("simulate: tasks must be sorted by arrival");
    }
  }

  Engine engine;
  TraceRecorder recorder;
  Fabric fabric(engine, recorder, opts.timing, opts.sched.n_regions, opts.functional_kernels,
                opts.image_seed);
  for (const auto& [region, kernel] : opts.initial_kernels) {
    fabric.set_initial_kernel(region, kernel);
  }
  Scheduler scheduler(engine, fabric, tasks, opts.sched);
  scheduler.schedule_arrivals();
  engine.run_until_idle([&](const Event& ev) { scheduler.handle(ev); });

  for (const auto& t : tasks) {
    if (t.state != TaskState::done) {
      throw std::logic_error("simulate: task " + std::to_string(t.id) +
                             " never completed (conservation breach)");
    }
  }

  SimResult result;
  result.trace = recorder.take();
  result.counters = scheduler.counters();
  for (const auto& ev : result.trace) {
    if (ev.type == TraceType::exec && !ev.preempted && ev.t_end > result.makespan) {
      result.makespan = ev.t_end;
    }
  }
  if (opts.functional_kernels) {
    for (const auto& t : tasks) {
      result.outputs.emplace(t.id, fabric.output_of(t.id));
    }
  }
  result.tasks = std::move(tasks);
  return result;
}

}  // namespace rrsim
