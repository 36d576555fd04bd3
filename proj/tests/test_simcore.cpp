#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "rrsim/simcore.hpp"

using namespace rrsim;

TEST_CASE("virtual time is exact integer nanoseconds") {
  CHECK(VirtualTime::from_seconds(1.234).ns() == 1'234'000'000);
  CHECK(VirtualTime::from_seconds(0.030).ns() == 30'000'000);
  CHECK(VirtualTime::from_ns(7).seconds() == doctest::Approx(7e-9));
  CHECK(VirtualTime::from_ns(5) + VirtualTime::from_ns(3) == VirtualTime::from_ns(8));
  CHECK(VirtualTime::from_ns(120'000) * 1800 == VirtualTime::from_ns(216'000'000));
}

TEST_CASE("events at now dispatch before strictly later ones") {
  Engine engine;
  std::vector<int> order;
  engine.schedule(VirtualTime::from_ns(10), EventKind::TaskArrival, 1);
  engine.schedule(VirtualTime::from_ns(0), EventKind::TaskArrival, 0);
  engine.run_until_idle([&](const Event& ev) { order.push_back(ev.task); });
  CHECK(order == std::vector<int>{0, 1});
}

TEST_CASE("equal-time events dispatch in submission order") {
  Engine engine;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    engine.schedule(VirtualTime::from_ns(42), EventKind::TaskArrival, i);
  }
  engine.run_until_idle([&](const Event& ev) { order.push_back(ev.task); });
  CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("handler observes the event's own time as now") {
  Engine engine;
  engine.schedule(VirtualTime::from_seconds(1.234), EventKind::TaskArrival, 0);
  VirtualTime seen;
  engine.run_until_idle([&](const Event&) { seen = engine.now(); });
  CHECK(seen == VirtualTime::from_seconds(1.234));
}

TEST_CASE("empty queue run returns zero") {
  Engine engine;
  CHECK(engine.run_until_idle([](const Event&) {}) == VirtualTime{});
  CHECK(engine.idle());
}

TEST_CASE("scheduling in the past is a hard fault") {
  Engine engine;
  engine.schedule(VirtualTime::from_ns(100), EventKind::TaskArrival, 0);
  engine.run_until_idle([&](const Event&) {
    CHECK_THROWS_AS(engine.schedule(VirtualTime::from_ns(99), EventKind::TaskArrival, 1),
                    std::logic_error);
  });
}

TEST_CASE("thirty arrivals invoke the handler exactly thirty times plus induced events") {
  Engine engine;
  int arrivals = 0;
  int induced = 0;
  for (int i = 0; i < 30; ++i) {
    engine.schedule(VirtualTime::from_ns(i * 10), EventKind::TaskArrival, i);
  }
  engine.run_until_idle([&](const Event& ev) {
    if (ev.kind == EventKind::TaskArrival) {
      ++arrivals;
      if (ev.task % 3 == 0) {
        engine.schedule(engine.now() + VirtualTime::from_ns(1), EventKind::KernelCompletion, ev.task, 0);
      }
    } else {
      ++induced;
    }
  });
  CHECK(arrivals == 30);
  CHECK(induced == 10);
}

TEST_CASE("cancelled events are not dispatched") {
  Engine engine;
  engine.schedule(VirtualTime::from_ns(1), EventKind::TaskArrival, 0);
  auto drop = engine.schedule(VirtualTime::from_ns(2), EventKind::TaskArrival, 1);
  engine.cancel(drop);
  CHECK_FALSE(engine.idle());
  std::vector<int> seen;
  engine.run_until_idle([&](const Event& ev) { seen.push_back(ev.task); });
  CHECK(seen == std::vector<int>{0});
  engine.cancel(drop);  // cancelling a dead id is a no-op
  CHECK(engine.idle());
}

TEST_CASE("handler faults abort the run with a diagnostic") {
  Engine engine;
  engine.schedule(VirtualTime::from_ns(5), EventKind::TaskArrival, 7);
  CHECK_THROWS_WITH_AS(
      engine.run_until_idle([](const Event&) { throw std::runtime_error("boom"); }),
      doctest::Contains("boom"), std::runtime_error);
}

TEST_CASE("property: dispatch sequence is identical across runs and never goes back in time") {
  auto run_once = [](unsigned seed) {
    std::mt19937 g(seed);
    std::uniform_int_distribution<int> td(0, 1000);
    Engine engine;
    std::vector<std::pair<std::int64_t, std::uint64_t>> log;
    for (int i = 0; i < 200; ++i) {
      engine.schedule(VirtualTime::from_ns(td(g)), EventKind::TaskArrival, i);
    }
    engine.run_until_idle([&](const Event& ev) { log.push_back({ev.time.ns(), ev.seq}); });
    return log;
  };

  for (int trial = 0; trial < 10; ++trial) {
    auto a = run_once(99 + trial);
    auto b = run_once(99 + trial);
    CHECK(a == b);
    for (std::size_t i = 1; i < a.size(); ++i) {
      CHECK(a[i].first >= a[i - 1].first);
    }
  }
}
