#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrsim/kernels.hpp"
#include "rrsim/simcore.hpp"
#include "rrsim/taus.hpp"

namespace rrsim {

// Arrival window T is in minutes; everything downstream works in seconds.
struct WorkloadSpec {
  int n_tasks = 30;
  double t_max_minutes = 0.1;
  int priority_lo = 0;  // 0 is the highest priority
  int priority_hi = 4;
  std::vector<KernelId> kernel_set{kAllKernels.begin(), kAllKernels.end()};
  int image_size = 600;  // pixels per side
};

enum class TaskState { pending, queued, running, preempted, done };

struct Task {
  int id = -1;
  VirtualTime arrival;
  int priority = 0;
  KernelId kernel = KernelId::Gauss1;
  int size = 0;  // image side length
  TaskState state = TaskState::pending;
  std::optional<Context> progress;
};

// Draws n_tasks tasks from a single Tausworthe stream, consuming
// (arrival, priority, kernel) per task in that order before sorting. Arrivals
// are uniform on [0, T*60) seconds; the returned list is sorted by arrival
// (stable, so equal arrivals keep draw order) and ids are assigned after
// sorting. Throws std::invalid_argument on an invalid spec.
std::vector<Task> generate_workload(const WorkloadSpec& spec, std::uint32_t seed);

// JSON replay format: an array of {id, arrival_s, priority, kernel, size}.
std::string workload_to_json(const std::vector<Task>& tasks);
std::vector<Task> workload_from_json(const std::string& text);
void save_workload(const std::string& path, const std::vector<Task>& tasks);
std::vector<Task> load_workload(const std::string& path);

}  // namespace rrsim
