#include "rrsim/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rrsim {

std::string_view trace_type_name(TraceType t) {
  switch (t) {
    case TraceType::exec:
      return "exec";
    case TraceType::swap:
      return "swap";
    case TraceType::evict:
      return "evict";
    case TraceType::restore:
      return "restore";
    case TraceType::setup:
      return "setup";
  }
  throw std::logic_error("trace_type_name: unknown type");
}

std::optional<TraceType> parse_trace_type(std::string_view name) {
  for (TraceType t : {TraceType::exec, TraceType::swap, TraceType::evict, TraceType::restore,
                      TraceType::setup}) {
    if (trace_type_name(t) == name) return t;
  }
  return std::nullopt;
}

void TraceRecorder::append(const TraceEvent& ev) {
  if (!(ev.t_start < ev.t_end)) {
    throw std::logic_error("trace: interval must have positive width (" +
                           std::string(trace_type_name(ev.type)) + " at t=" +
                           std::to_string(ev.t_start.ns()) + "ns)");
  }
  events_.push_back(ev);
}

std::string trace_to_json(const std::vector<TraceEvent>& events) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& ev : events) {
    nlohmann::ordered_json obj;
    obj["region"] = ev.region;
    if (ev.task >= 0) {
      obj["task"] = ev.task;
    } else {
      obj["task"] = nullptr;
    }
    if (ev.kernel) {
      obj["kernel"] = std::string(kernel_name(*ev.kernel));
    } else {
      obj["kernel"] = nullptr;
    }
    obj["t_start"] = ev.t_start.ns();
    obj["t_end"] = ev.t_end.ns();
    obj["type"] = std::string(trace_type_name(ev.type));
    obj["preempted"] = ev.preempted;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<TraceEvent> trace_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::runtime_error("trace json: expected a top-level array");
  }
  std::vector<TraceEvent> events;
  events.reserve(arr.size());
  for (const auto& obj : arr) {
    TraceEvent ev;
    ev.region = obj.at("region").get<int>();
    ev.task = obj.at("task").is_null() ? -1 : obj.at("task").get<int>();
    if (!obj.at("kernel").is_null()) {
      const auto name = obj.at("kernel").get<std::string>();
      auto kid = parse_kernel(name);
      if (!kid) {
        throw std::runtime_error("trace json: unknown kernel '" + name + "'");
      }
      ev.kernel = *kid;
    }
    ev.t_start = VirtualTime::from_ns(obj.at("t_start").get<std::int64_t>());
    ev.t_end = VirtualTime::from_ns(obj.at("t_end").get<std::int64_t>());
    const auto type_name = obj.at("type").get<std::string>();
    auto type = parse_trace_type(type_name);
    if (!type) {
      throw std::runtime_error("trace json: unknown event type '" + type_name + "'");
    }
    ev.type = *type;
    ev.preempted = obj.at("preempted").get<bool>();
    events.push_back(ev);
  }
  return events;
}

void save_trace(const std::string& path, const std::vector<TraceEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << trace_to_json(events);
}

std::vector<TraceEvent> load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return trace_from_json(ss.str());
}

}  // namespace rrsim
