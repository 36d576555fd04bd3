#include "rrsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rrsim {

std::vector<Task> generate_workload(const WorkloadSpec& spec, std::uint32_t seed) {
  if (spec.n_tasks < 0) {
    throw std::invalid_argument("workload: n_tasks must be non-negative");
  }
  if (spec.t_max_minutes <= 0) {
    throw std::invalid_argument("workload: arrival window T must be positive");
  }
  if (spec.kernel_set.empty()) {
    throw std::invalid_argument("workload: kernel_set must be non-empty");
  }
  if (spec.priority_lo > spec.priority_hi || spec.priority_lo < 0) {
    throw std::invalid_argument("workload: bad priority range");
  }

  const std::int64_t window_ns = static_cast<std::int64_t>(std::llround(spec.t_max_minutes * 60.0 * 1e9));
  const std::uint64_t levels = static_cast<std::uint64_t>(spec.priority_hi - spec.priority_lo + 1);

  TausStream stream(seed);
  std::vector<Task> tasks(static_cast<std::size_t>(spec.n_tasks));
  for (auto& t : tasks) {
    t.arrival = VirtualTime::from_ns(
        static_cast<std::int64_t>(stream.next_below(static_cast<std::uint64_t>(window_ns))));
    t.priority = spec.priority_lo + static_cast<int>(stream.next_below(levels));
    t.kernel = spec.kernel_set[stream.next_below(spec.kernel_set.size())];
    t.size = spec.image_size;
  }
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const Task& a, const Task& b) { return a.arrival < b.arrival; });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    tasks[i].id = static_cast<int>(i);
  }
  return tasks;
}

std::string workload_to_json(const std::vector<Task>& tasks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : tasks) {
    nlohmann::ordered_json obj;
    obj["id"] = t.id;
    obj["arrival_s"] = t.arrival.seconds();
    obj["priority"] = t.priority;
    obj["kernel"] = std::string(kernel_name(t.kernel));
    obj["size"] = t.size;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<Task> workload_from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::runtime_error("workload json: expected a top-level array");
  }
  std::vector<Task> tasks;
  tasks.reserve(arr.size());
  for (const auto& obj : arr) {
    Task t;
    t.id = obj.at("id").get<int>();
    t.arrival = VirtualTime::from_seconds(obj.at("arrival_s").get<double>());
    t.priority = obj.at("priority").get<int>();
    const auto name = obj.at("kernel").get<std::string>();
    auto kid = parse_kernel(name);
    if (!kid) {
      throw std::runtime_error("workload json: unknown kernel '" + name + "'");
    }
    t.kernel = *kid;
    t.size = obj.at("size").get<int>();
    if (t.size <= 0) {
      throw std::runtime_error("workload json: task size must be positive");
    }
    tasks.push_back(t);
  }
  return tasks;
}

void save_workload(const std::string& path, const std::vector<Task>& tasks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << workload_to_json(tasks);
}

std::vector<Task> load_workload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return workload_from_json(ss.str());
}

}  // namespace rrsim
