#include "rrsim/simcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rrsim {

VirtualTime VirtualTime::from_seconds(double s) {
  return VirtualTime(static_cast<std::int64_t>(std::llround(s * 1e9)));
}

std::uint64_t Engine::schedule(VirtualTime t, EventKind kind, int task, int region) {
  if (t < now_) {
    throw std::logic_error("schedule: event at t=" + std::to_string(t.ns()) +
                           "ns is in the past (now=" + std::to_string(now_.ns()) + "ns)");
  }
  Event ev;
  ev.time = t;
  ev.seq = next_seq_++;
  ev.kind = kind;
  ev.task = task;
  ev.region = region;
  queue_.push(ev);
  pending_.insert(ev.seq);
  return ev.seq;
}

void Engine::cancel(std::uint64_t event_id) {
  if (pending_.erase(event_id) != 0) {
    cancelled_.insert(event_id);
  }
}

VirtualTime Engine::run_until_idle(const Handler& handler) {
  while (!queue_.empty()) {
    Event ev = queue_.top();
    queue_.pop();
    if (auto it = cancelled_.find(ev.seq); it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    pending_.erase(ev.seq);
    now_ = ev.time;
    try {
      handler(ev);
    } catch (const std::exception& e) {
      throw std::runtime_error("event dispatch failed at t=" + std::to_string(ev.time.ns()) +
                               "ns (kind=" + std::to_string(static_cast<int>(ev.kind)) +
                               ", seq=" + std::to_string(ev.seq) + ", task=" + std::to_string(ev.task) +
                               ", region=" + std::to_string(ev.region) + "): " + e.what());
    }
  }
  return now_;
}

}  // namespace rrsim
