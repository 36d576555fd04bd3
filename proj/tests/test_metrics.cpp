#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rrsim/metrics.hpp"
#include "rrsim/trace.hpp"

using namespace rrsim;

namespace {

TraceEvent exec_ev(int region, int task, double start_s, double end_s, bool preempted = false) {
  TraceEvent ev;
  ev.region = region;
  ev.task = task;
  ev.kernel = KernelId::Med1;
  ev.t_start = VirtualTime::from_seconds(start_s);
  ev.t_end = VirtualTime::from_seconds(end_s);
  ev.type = TraceType::exec;
  ev.preempted = preempted;
  return ev;
}

Task mk_task(int id, double arrival_s, int priority) {
  Task t;
  t.id = id;
  t.arrival = VirtualTime::from_seconds(arrival_s);
  t.priority = priority;
  t.kernel = KernelId::Med1;
  t.size = 8;
  return t;
}

}  // namespace

TEST_CASE("service times on a hand-built three-task trace") {
  // t0 (p0) arrives at 0, first exec at 1.5; t1 (p1) arrives at 1, exec at 3;
  // t2 (p0) arrives at 2, exec at 2. Priority 0 services are {1.5, 0}:
  // mean 0.75, population std 0.75. Priority 1 service is {2.0}.
  std::vector<TraceEvent> trace = {
      exec_ev(0, 0, 1.5, 3.0),
      exec_ev(0, 1, 3.0, 4.0),
      exec_ev(1, 2, 2.0, 2.5),
  };
  std::vector<Task> tasks = {mk_task(0, 0.0, 0), mk_task(1, 1.0, 1), mk_task(2, 2.0, 0)};
  auto stats = service_times(trace, tasks);
  CHECK(stats.at(0).mean == doctest::Approx(0.75));
  CHECK(stats.at(0).stddev == doctest::Approx(0.75));
  CHECK(stats.at(0).count == 2);
  CHECK(stats.at(1).mean == doctest::Approx(2.0));
  CHECK(stats.at(1).stddev == doctest::Approx(0.0));
}

TEST_CASE("a task served into a free loaded region has service time zero") {
  std::vector<TraceEvent> trace = {exec_ev(0, 0, 4.25, 5.0)};
  std::vector<Task> tasks = {mk_task(0, 4.25, 3)};
  CHECK(service_times(trace, tasks).at(3).mean == 0.0);
}

TEST_CASE("service time counts from the first exec interval even when preempted") {
  std::vector<TraceEvent> trace = {
      exec_ev(0, 0, 1.0, 2.0, true),
      exec_ev(0, 0, 5.0, 6.0),
  };
  std::vector<Task> tasks = {mk_task(0, 0.5, 2)};
  CHECK(service_times(trace, tasks).at(2).mean == doctest::Approx(0.5));
}

TEST_CASE("a task without any exec interval is an incomplete run") {
  std::vector<TraceEvent> trace = {exec_ev(0, 0, 1.0, 2.0)};
  std::vector<Task> tasks = {mk_task(0, 0.0, 0), mk_task(1, 0.0, 1)};
  CHECK_THROWS_WITH_AS(service_times(trace, tasks), doctest::Contains("incomplete"),
                       std::runtime_error);
}

TEST_CASE("throughput is completions over the last completion time") {
  std::vector<TraceEvent> trace;
  for (int i = 0; i < 30; ++i) {
    trace.push_back(exec_ev(i % 2, i, 0.4 * i, 0.5 * (i + 1)));
  }
  // Last completion at 15 s.
  CHECK(throughput(trace) == doctest::Approx(2.0));
}

TEST_CASE("throughput without completions is undefined") {
  std::vector<TraceEvent> empty;
  CHECK_THROWS_AS(throughput(empty), std::runtime_error);
  std::vector<TraceEvent> only_preempted = {exec_ev(0, 0, 1.0, 2.0, true)};
  CHECK_THROWS_AS(throughput(only_preempted), std::runtime_error);
}

TEST_CASE("overhead quotient") {
  CHECK(overhead(3.0, 3.0) == 0.0);
  CHECK(overhead(6.87, 6.27) == doctest::Approx(0.0873).epsilon(1e-3));
  CHECK(overhead(2.0, 2.5) < 0.0);  // a faster variant is allowed
  CHECK_THROWS_AS(overhead(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("overhead antisymmetry identity") {
  const double pairs[][2] = {{6.87, 6.27}, {1.46, 1.44}, {2.0, 2.5}, {0.79, 0.77}};
  for (const auto& p : pairs) {
    const double a = p[0];
    const double b = p[1];
    CHECK(overhead(a, b) == doctest::Approx(-overhead(b, a) * (b / a)).epsilon(1e-12));
  }
}

TEST_CASE("trace json export round-trips exactly") {
  std::vector<TraceEvent> trace = {exec_ev(0, 3, 0.25, 1.0, true)};
  TraceEvent swap;
  swap.region = 1;
  swap.kernel = KernelId::Gauss1;
  swap.t_start = VirtualTime::from_ns(123);
  swap.t_end = VirtualTime::from_ns(456);
  swap.type = TraceType::swap;
  trace.push_back(swap);
  TraceEvent setup;
  setup.region = 1;
  setup.t_start = VirtualTime::from_ns(456);
  setup.t_end = VirtualTime::from_ns(789);
  setup.type = TraceType::setup;
  trace.push_back(setup);

  const std::string text = trace_to_json(trace);
  CHECK(trace_from_json(text) == trace);
  CHECK(trace_to_json(trace_from_json(text)) == text);
}

TEST_CASE("trace json rejects unknown event types") {
  CHECK_THROWS_AS(
      trace_from_json(
          R"([{"region":0,"task":null,"kernel":null,"t_start":0,"t_end":1,"type":"dance","preempted":false}])"),
      std::runtime_error);
}

TEST_CASE("empty exports: empty json array and header-only csv") {
  CHECK(trace_from_json(trace_to_json({})).empty());
  std::ostringstream csv;
  write_results_csv(csv, {});
  CHECK(csv.str() == results_csv_header() + "\n");
}

TEST_CASE("recorder rejects zero-width intervals") {
  TraceRecorder rec;
  TraceEvent ev = exec_ev(0, 0, 1.0, 1.0);
  CHECK_THROWS_AS(rec.append(ev), std::logic_error);
}

TEST_CASE("csv rows carry the pinned column order") {
  ResultRow row;
  row.seed = 28871727u;
  row.scenario = "busy";
  row.regions = 2;
  row.mode = "partial";
  row.preemption = true;
  row.size = 600;
  row.priority = 0;
  row.service = {0.25, 0.125, 4};
  row.throughput_tps = 1.5;
  row.makespan_s = 20.0;
  row.n_preemptions = 3;
  std::ostringstream out;
  write_results_csv(out, {row});
  CHECK(out.str() ==
        results_csv_header() +
            "\n28871727,busy,2,partial,on,600,0,0.250000000,0.125000000,1.500000000,"
            "20.000000000,3\n");
}

TEST_CASE("empty priority levels serialise as nan") {
  ResultRow row;
  row.scenario = "busy";
  row.mode = "partial";
  std::ostringstream out;
  write_results_csv(out, {row});
  CHECK(out.str().find(",nan,nan,") != std::string::npos);
}
