#include "rrsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace rrsim {

namespace {

std::string fixed9(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  out.count = static_cast<long>(xs.size());
  if (xs.empty()) {
    out.mean = std::numeric_limits<double>::quiet_NaN();
    out.stddev = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

}  // namespace

std::map<int, MeanStd> service_times(const std::vector<TraceEvent>& trace,
                                     const std::vector<Task>& tasks) {
  std::unordered_map<int, VirtualTime> first_exec;
  for (const auto& ev : trace) {
    if (ev.type != TraceType::exec || ev.task < 0) continue;
    auto it = first_exec.find(ev.task);
    if (it == first_exec.end() || ev.t_start < it->second) {
      first_exec[ev.task] = ev.t_start;
    }
  }
  std::map<int, std::vector<double>> per_priority;
  for (const auto& t : tasks) {
    auto it = first_exec.find(t.id);
    if (it == first_exec.end()) {
      throw std::runtime_error("service_times: incomplete run, task " + std::to_string(t.id) +
                               " has no exec interval");
    }
    per_priority[t.priority].push_back((it->second - t.arrival).seconds());
  }
  std::map<int, MeanStd> out;
  for (const auto& [prio, xs] : per_priority) {
    out[prio] = mean_std(xs);
  }
  return out;
}

double throughput(const std::vector<TraceEvent>& trace) {
  long completed = 0;
  VirtualTime last;
  for (const auto& ev : trace) {
    if (ev.type != TraceType::exec || ev.preempted) continue;
    ++completed;
    if (ev.t_end > last) last = ev.t_end;
  }
  if (completed == 0) {
    throw std::runtime_error("throughput: undefined, no task completed");
  }
  return static_cast<double>(completed) / last.seconds();
}

double overhead(double tp_baseline, double tp_variant) {
  if (!(tp_baseline > 0.0)) {
    throw std::invalid_argument("overhead: baseline throughput must be positive");
  }
  return 1.0 - tp_variant / tp_baseline;
}

RunStats run_stats(const std::vector<TraceEvent>& trace, const std::vector<Task>& tasks,
                   const SimCounters& counters) {
  RunStats stats;
  stats.counters = counters;
  if (!tasks.empty()) {
    stats.service = service_times(trace, tasks);
    stats.throughput_tps = throughput(trace);
    for (const auto& ev : trace) {
      if (ev.type == TraceType::exec && !ev.preempted && ev.t_end > stats.makespan) {
        stats.makespan = ev.t_end;
      }
    }
  }
  return stats;
}

std::string results_csv_header() {
  return "seed,scenario,regions,mode,preemption,size,priority,mean_service_s,std_service_s,"
         "throughput_tps,makespan_s,n_preemptions";
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << results_csv_header() << "\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.scenario << ',' << r.regions << ',' << r.mode << ','
        << (r.preemption ? "on" : "off") << ',' << r.size << ',' << r.priority << ','
        << fixed9(r.service.count > 0 ? r.service.mean : std::numeric_limits<double>::quiet_NaN())
        << ','
        << fixed9(r.service.count > 0 ? r.service.stddev : std::numeric_limits<double>::quiet_NaN())
        << ',' << fixed9(r.throughput_tps) << ',' << fixed9(r.makespan_s) << ','
        << r.n_preemptions << "\n";
  }
}

}  // namespace rrsim
