#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "tsnsim/kernel.h"

using namespace tsnsim;

namespace {

std::size_t source_of(const Event& e) {
  return std::get<EmissionDue>(e.payload).source;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("scheduling on an empty queue") {
  Simulator sim;
  sim.schedule(SimTime(), EmissionDue{0});
  CHECK(sim.pending() == 1);
}

TEST_CASE("events fire in time order, ties in insertion order") {
  Simulator sim;
  sim.schedule(SimTime::us(20), EmissionDue{0});
  sim.schedule(SimTime::us(10), EmissionDue{1});
  sim.schedule(SimTime::us(10), EmissionDue{2});
  sim.schedule(SimTime::us(Rational(29, 3)), EmissionDue{3});
  std::vector<std::size_t> order;
  std::vector<SimTime> times;
  const auto n = sim.run(SimTime::ms(1), [&](Event& e) {
    order.push_back(source_of(e));
    times.push_back(sim.now());
  });
  CHECK(n == 4);
  CHECK(order == std::vector<std::size_t>{3, 1, 2, 0});
  CHECK(times.back() == SimTime::us(20));
}

TEST_CASE("cancelled events never fire") {
  Simulator sim;
  const EventId a = sim.schedule(SimTime::us(1), EmissionDue{0});
  sim.schedule(SimTime::us(2), EmissionDue{1});
  CHECK(sim.cancel(a));
  CHECK_FALSE(sim.cancel(a));
  CHECK(sim.pending() == 1);
  std::vector<std::size_t> fired;
  sim.run(SimTime::us(5), [&](Event& e) { fired.push_back(source_of(e)); });
  CHECK(fired == std::vector<std::size_t>{1});
  CHECK(sim.dispatched() == 1);
}

TEST_CASE("run stops at the horizon and keeps later events") {
  Simulator sim;
  sim.schedule(SimTime(), EmissionDue{0});
  sim.schedule(SimTime::us(1), EmissionDue{1});
  CHECK(sim.run(SimTime(), [](Event&) {}) == 1);
  CHECK(sim.pending() == 1);
  CHECK(sim.run(SimTime::us(1), [](Event&) {}) == 1);
}

TEST_CASE("handlers may schedule at the current instant") {
  Simulator sim;
  sim.schedule(SimTime::us(1), EmissionDue{0});
  std::vector<std::size_t> fired;
  sim.run(SimTime::us(1), [&](Event& e) {
    fired.push_back(source_of(e));
    if (source_of(e) < 3) sim.schedule(sim.now(), EmissionDue{source_of(e) + 1});
  });
  CHECK(fired == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("scheduling into the past is rejected") {
  Simulator sim;
  sim.schedule(SimTime::us(5), EmissionDue{0});
  sim.run(SimTime::us(5), [](Event&) {});
  CHECK_THROWS_AS(sim.schedule(SimTime::us(4), EmissionDue{1}),
                  std::logic_error);
}

}  // TEST_SUITE
