#include "rrsim/fabric.hpp"

#include <stdexcept>

namespace rrsim {

namespace {

std::string assignment_key(const std::vector<std::optional<KernelId>>& assignment) {
  std::string key;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i > 0) key += ",";
    key += assignment[i] ? std::string(kernel_name(*assignment[i])) : "none";
  }
  return key;
}

}  // namespace

const std::string& BitstreamLibrary::partial(KernelId id) {
  auto it = partial_.find(id);
  if (it == partial_.end()) {
    it = partial_.emplace(id, "partial:" + std::string(kernel_name(id))).first;
  }
  return it->second;
}

const std::string& BitstreamLibrary::full(const std::vector<std::optional<KernelId>>& assignment) {
  const std::string key = assignment_key(assignment);
  auto it = full_.find(key);
  if (it == full_.end()) {
    it = full_.emplace(key, "full:" + key).first;
  }
  return it->second;
}

Fabric::Fabric(Engine& engine, TraceRecorder& trace, TimingModel timing, int n_regions,
               bool functional_kernels, std::uint32_t image_seed)
    : engine_(engine),
      trace_(trace),
      timing_(std::move(timing)),
      functional_kernels_(functional_kernels),
      image_seed_(image_seed) {
  if (n_regions < 1) {
    throw std::invalid_argument("fabric: need at least one region");
  }
  timing_.validate();
  regions_.resize(static_cast<std::size_t>(n_regions));
  for (int i = 0; i < n_regions; ++i) {
    regions_[static_cast<std::size_t>(i)].id = i;
  }
  banks_.resize(static_cast<std::size_t>(n_regions));
}

RegionState& Fabric::region_mut(int id) {
  if (id < 0 || id >= n_regions()) {
    throw std::logic_error("fabric: no region " + std::to_string(id));
  }
  return regions_[static_cast<std::size_t>(id)];
}

void Fabric::set_initial_kernel(int region, KernelId id) {
  RegionState& r = region_mut(region);
  if (r.status != RegionStatus::free) {
    throw std::logic_error("fabric: initial kernels can only be set on free regions");
  }
  r.loaded = id;
  bitstreams_.partial(id);
}

KernelInstance Fabric::make_instance(const Task& task) const {
  if (functional_kernels_) {
    // Per-task deterministic image; content never influences the schedule.
    const std::uint32_t seed = image_seed_ ^ (static_cast<std::uint32_t>(task.id) * 2654435761u);
    return KernelInstance::functional(task.kernel, taus_image(task.size, task.size, seed));
  }
  return KernelInstance::timing_only(task.kernel, task.size, task.size);
}

void Fabric::request_partial_reconfig(int region, KernelId id) {
  RegionState& r = region_mut(region);
  if (r.status != RegionStatus::free) {
    throw std::logic_error("fabric: partial reconfiguration requested on a non-free region");
  }
  if (r.loaded == id) {
    throw std::logic_error("fabric: swap to the already-loaded kernel must be filtered upstream");
  }
  bitstreams_.partial(id);
  icap_queue_.push_back({region, id});
  try_start_next_reconfig();
}

void Fabric::try_start_next_reconfig() {
  if (reconfig_in_flight_ || icap_queue_.empty()) return;
  const ReconfigRequest req = icap_queue_.front();
  icap_queue_.pop_front();
  RegionState& r = region_mut(req.region);
  if (r.status != RegionStatus::free) {
    throw std::logic_error("fabric: reconfiguration lock violation (region busy at grant)");
  }
  reconfig_in_flight_ = true;
  active_partial_ = req;
  r.status = RegionStatus::reconfiguring;
  TraceEvent ev;
  ev.region = req.region;
  ev.kernel = req.kernel;
  ev.t_start = engine_.now();
  ev.t_end = engine_.now() + timing_.t_partial_reconfig;
  ev.type = TraceType::swap;
  trace_.append(ev);
  engine_.schedule(ev.t_end, EventKind::ReconfigDone, -1, req.region);
}

void Fabric::complete_partial_reconfig(int region) {
  if (!active_partial_ || active_partial_->region != region) {
    throw std::logic_error("fabric: stray partial ReconfigDone for region " + std::to_string(region));
  }
  RegionState& r = region_mut(region);
  r.loaded = active_partial_->kernel;
  r.status = RegionStatus::free;
  active_partial_.reset();
  reconfig_in_flight_ = false;
  try_start_next_reconfig();
}

void Fabric::begin_full_reconfig(int requested_region,
                                 const std::vector<std::optional<KernelId>>& assignment,
                                 VirtualTime start) {
  if (reconfig_in_flight_) {
    throw std::logic_error("fabric: reconfiguration lock violation (full reconfig while port busy)");
  }
  if (assignment.size() != regions_.size()) {
    throw std::logic_error("fabric: full assignment must cover every region");
  }
  for (const RegionState& r : regions_) {
    if (r.status == RegionStatus::running) {
      throw std::logic_error("fabric: full reconfiguration with region " + std::to_string(r.id) +
                             " still running");
    }
  }
  region_mut(requested_region);
  bitstreams_.full(assignment);
  reconfig_in_flight_ = true;
  full_assignment_ = assignment;
  for (RegionState& r : regions_) {
    r.status = RegionStatus::reconfiguring;
  }
  TraceEvent swap;
  swap.region = requested_region;
  swap.kernel = assignment[static_cast<std::size_t>(requested_region)];
  swap.t_start = start;
  swap.t_end = start + timing_.t_full_reconfig;
  swap.type = TraceType::swap;
  trace_.append(swap);
  if (timing_.t_setup_fpga > VirtualTime{}) {
    TraceEvent setup;
    setup.region = requested_region;
    setup.t_start = swap.t_end;
    setup.t_end = swap.t_end + timing_.t_setup_fpga;
    setup.type = TraceType::setup;
    trace_.append(setup);
  }
  engine_.schedule(start + timing_.t_full_reconfig + timing_.t_setup_fpga, EventKind::ReconfigDone,
                   -1, -1);
}

void Fabric::complete_full_reconfig() {
  if (!reconfig_in_flight_ || full_assignment_.empty()) {
    throw std::logic_error("fabric: stray full ReconfigDone");
  }
  for (RegionState& r : regions_) {
    r.loaded = full_assignment_[static_cast<std::size_t>(r.id)];
    r.status = RegionStatus::free;
  }
  full_assignment_.clear();
  reconfig_in_flight_ = false;
}

VirtualTime Fabric::launch(int region, Task& task, VirtualTime start) {
  RegionState& r = region_mut(region);
  if (r.status != RegionStatus::free) {
    throw std::logic_error("fabric: launch on a non-free region");
  }
  if (start < engine_.now()) {
    throw std::logic_error("fabric: launch start lies in the past");
  }
  if (!r.loaded || *r.loaded != task.kernel) {
    throw std::logic_error("fabric: launch kernel mismatch on region " + std::to_string(region) +
                           " (task " + std::to_string(task.id) + " needs " +
                           std::string(kernel_name(task.kernel)) + ")");
  }

  KernelInstance inst = [&] {
    auto it = suspended_.find(task.id);
    if (it != suspended_.end()) {
      KernelInstance moved = std::move(it->second);
      suspended_.erase(it);
      return moved;
    }
    return make_instance(task);
  }();
  const bool resumed = task.progress.has_value();
  if (resumed) {
    inst.restore_context(*task.progress);
  }

  r.launch_time = start;
  r.exec_start = resumed ? start + timing_.t_ctx_restore : start;
  r.resumed = resumed;
  r.quanta_at_launch = inst.quanta_done();
  r.quantum = timing_.quantum(task.kernel, task.size);
  const std::int64_t remaining = inst.total_quanta() - inst.quanta_done();
  if (remaining < 1) {
    throw std::logic_error("fabric: launch with no remaining quanta for task " +
                           std::to_string(task.id));
  }
  const VirtualTime completion = r.exec_start + r.quantum * remaining;
  r.completion_time = completion;
  r.completion_event = engine_.schedule(completion, EventKind::KernelCompletion, task.id, region);
  r.status = RegionStatus::running;
  r.current_task = task.id;
  r.instance = std::move(inst);
  task.state = TaskState::running;
  return completion;
}

Context Fabric::halt_and_save(int region, Task& task, VirtualTime at) {
  RegionState& r = region_mut(region);
  if (r.status != RegionStatus::running) {
    throw std::logic_error("fabric: preempt on a region that is not running");
  }
  if (r.current_task != task.id) {
    throw std::logic_error("fabric: preempt task/region mismatch");
  }
  if (at >= r.completion_time) {
    // The kernel finished its work at or before the halt; its completion
    // interrupt is already due and the scheduler must let it finish instead.
    throw std::logic_error("fabric: halt requested for a kernel that already finished");
  }
  engine_.cancel(r.completion_event);

  bool torn = false;
  if (at > r.exec_start) {
    const std::int64_t elapsed = (at - r.exec_start).ns();
    const std::int64_t q = r.quantum.ns();
    std::int64_t completed = elapsed / q;
    const std::int64_t rem = elapsed % q;
    if (rem != 0 && rem >= q - timing_.save_window.ns()) {
      // The halt landed inside the save window at the end of the in-flight
      // quantum: its row is computed but the checkpoint commit is torn.
      completed += 1;
      torn = true;
    }
    const std::int64_t target = r.quanta_at_launch + completed;
    if (target > r.instance->quanta_done()) {
      r.instance->advance(static_cast<int>(target - r.instance->quanta_done()));
    }
    if (r.resumed) {
      TraceEvent restore;
      restore.region = region;
      restore.task = task.id;
      restore.kernel = task.kernel;
      restore.t_start = r.launch_time;
      restore.t_end = r.exec_start;
      restore.type = TraceType::restore;
      trace_.append(restore);
    }
    TraceEvent exec;
    exec.region = region;
    exec.task = task.id;
    exec.kernel = task.kernel;
    exec.t_start = r.exec_start;
    exec.t_end = at;
    exec.type = TraceType::exec;
    exec.preempted = true;
    trace_.append(exec);
  } else if (r.resumed && at > r.launch_time) {
    // Halted while the context copy-back was still in flight: the restore
    // interval truncates and no quantum ran.
    TraceEvent restore;
    restore.region = region;
    restore.task = task.id;
    restore.kernel = task.kernel;
    restore.t_start = r.launch_time;
    restore.t_end = at;
    restore.type = TraceType::restore;
    trace_.append(restore);
  }

  Context ctx = r.instance->save_context(torn);
  banks_[static_cast<std::size_t>(region)] = ctx;
  if (timing_.t_ctx_save > VirtualTime{}) {
    TraceEvent evict;
    evict.region = region;
    evict.task = task.id;
    evict.kernel = task.kernel;
    evict.t_start = at;
    evict.t_end = at + timing_.t_ctx_save;
    evict.type = TraceType::evict;
    trace_.append(evict);
  }
  suspended_.insert_or_assign(task.id, std::move(*r.instance));
  r.instance.reset();
  r.status = RegionStatus::free;
  r.current_task = -1;
  task.state = TaskState::preempted;
  task.progress = ctx;
  return ctx;
}

Context Fabric::preempt(int region, Task& task) {
  Context ctx = halt_and_save(region, task, engine_.now());
  engine_.schedule(engine_.now() + timing_.t_ctx_save, EventKind::PreemptApplied, task.id, region);
  return ctx;
}

void Fabric::finish(int region, Task& task) {
  RegionState& r = region_mut(region);
  if (r.status != RegionStatus::running || r.current_task != task.id) {
    throw std::logic_error("fabric: completion for a task that is not running");
  }
  if (engine_.now() < r.completion_time) {
    throw std::logic_error("fabric: finish before the kernel's completion time");
  }
  // No-op on the normal interrupt path; drops the pending event when a task
  // is finished early because a halt raced its completion instant.
  engine_.cancel(r.completion_event);
  if (r.resumed) {
    TraceEvent restore;
    restore.region = region;
    restore.task = task.id;
    restore.kernel = task.kernel;
    restore.t_start = r.launch_time;
    restore.t_end = r.exec_start;
    restore.type = TraceType::restore;
    trace_.append(restore);
  }
  TraceEvent exec;
  exec.region = region;
  exec.task = task.id;
  exec.kernel = task.kernel;
  exec.t_start = r.exec_start;
  exec.t_end = engine_.now();
  exec.type = TraceType::exec;
  trace_.append(exec);

  if (!r.instance->finished()) {
    r.instance->advance(static_cast<int>(r.instance->total_quanta() - r.instance->quanta_done()));
  }
  if (functional_kernels_) {
    outputs_.insert_or_assign(task.id, r.instance->output());
  }
  suspended_.erase(task.id);
  r.instance.reset();
  r.status = RegionStatus::free;
  r.current_task = -1;
  task.state = TaskState::done;
  task.progress.reset();
}

void Fabric::write_context_bank(int region, const Context& ctx) {
  region_mut(region);
  banks_[static_cast<std::size_t>(region)] = ctx;
}

const Image& Fabric::output_of(int task_id) const {
  auto it = outputs_.find(task_id);
  if (it == outputs_.end()) {
    throw std::logic_error("fabric: no completed functional output for task " +
                           std::to_string(task_id));
  }
  return it->second;
}

const Context& Fabric::read_context_bank(int region) const {
  if (region < 0 || region >= n_regions()) {
    throw std::logic_error("fabric: no region " + std::to_string(region));
  }
  const auto& bank = banks_[static_cast<std::size_t>(region)];
  if (!bank) {
    throw std::runtime_error("fabric: context bank " + std::to_string(region) +
                             " read before any write");
  }
  return *bank;
}

}  // namespace rrsim
