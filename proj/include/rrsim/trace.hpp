#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrsim/kernels.hpp"
#include "rrsim/simcore.hpp"

namespace rrsim {

enum class TraceType { exec, swap, evict, restore, setup };

std::string_view trace_type_name(TraceType t);
std::optional<TraceType> parse_trace_type(std::string_view name);

// One interval on the Gantt timeline. task < 0 means no task is associated
// (swap and setup intervals). `preempted` marks an exec interval that was
// ended by preemption rather than completion.
struct TraceEvent {
  int region = 0;
  int task = -1;
  std::optional<KernelId> kernel;
  VirtualTime t_start;
  VirtualTime t_end;
  TraceType type = TraceType::exec;
  bool preempted = false;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Append-only interval log, populated on the simulation thread. Intervals
// must have positive width.
class TraceRecorder {
 public:
  void append(const TraceEvent& ev);
  const std::vector<TraceEvent>& events() const { return events_; }
  std::vector<TraceEvent> take() { return std::move(events_); }

 private:
  std::vector<TraceEvent> events_;
};

// JSON Gantt document: an array of TraceEvent objects with keys region, task,
// kernel, t_start, t_end, type, preempted. Times are integer nanoseconds so a
// round-trip reproduces the trace exactly; task and kernel are null when
// absent.
std::string trace_to_json(const std::vector<TraceEvent>& events);
std::vector<TraceEvent> trace_from_json(const std::string& text);
void save_trace(const std::string& path, const std::vector<TraceEvent>& events);
std::vector<TraceEvent> load_trace(const std::string& path);

}  // namespace rrsim
