#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

namespace rrsim {

// Simulation clock value in integer nanoseconds. Keeping time integral means
// sums of configured latencies order identically on every platform, which the
// golden-trace tests rely on.
class VirtualTime {
 public:
  constexpr VirtualTime() = default;

  static constexpr VirtualTime from_ns(std::int64_t ns) { return VirtualTime(ns); }
  // Config/report boundary only; internal arithmetic stays integral.
  static VirtualTime from_seconds(double s);

  constexpr std::int64_t ns() const { return ns_; }
  double seconds() const { return static_cast<double>(ns_) * 1e-9; }

  friend constexpr bool operator==(VirtualTime, VirtualTime) = default;
  friend constexpr auto operator<=>(VirtualTime, VirtualTime) = default;

  constexpr VirtualTime operator+(VirtualTime o) const { return VirtualTime(ns_ + o.ns_); }
  constexpr VirtualTime operator-(VirtualTime o) const { return VirtualTime(ns_ - o.ns_); }
  constexpr VirtualTime operator*(std::int64_t n) const { return VirtualTime(ns_ * n); }
  VirtualTime& operator+=(VirtualTime o) {
    ns_ += o.ns_;
    return *this;
  }

 private:
  explicit constexpr VirtualTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

enum class EventKind {
  TaskArrival,       // a generated task reaches the scheduler
  KernelCompletion,  // a region's kernel raised its completion interrupt
  ReconfigDone,      // a partial (region >= 0) or full (region < 0) reconfiguration finished
  PreemptApplied,    // a region's context save completed after a preempt request
};

// region < 0 encodes "whole fabric" for ReconfigDone.
struct Event {
  VirtualTime time;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::TaskArrival;
  int task = -1;
  int region = -1;
};

// Deterministic single-threaded event queue. Dispatch order is lexicographic
// on (time, seq); seq is assigned in submission order, so equal-time events
// run FIFO. Instances are not shareable across threads during a run, but
// independent engines may run in parallel.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  VirtualTime now() const { return now_; }
  bool idle() const { return pending_.empty(); }

  // Throws std::logic_error if t < now(); scheduling in the past is a
  // programming error, not a recoverable condition.
  std::uint64_t schedule(VirtualTime t, EventKind kind, int task = -1, int region = -1);

  // Lazily removes a pending event. Cancelling an already-dispatched or
  // unknown id is a no-op.
  void cancel(std::uint64_t event_id);

  // Dispatches events in order until the queue drains; returns the time of
  // the last dispatched event (zero if none was ever dispatched). A handler
  // exception aborts the run with the offending event described in the
  // message.
  VirtualTime run_until_idle(const Handler& handler);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<std::uint64_t> pending_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_ = 0;
  VirtualTime now_;
};

}  // namespace rrsim
