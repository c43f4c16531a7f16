#include <doctest.h>

#include <stdexcept>

#include "tsnsim/traffic.h"

using namespace tsnsim;

namespace {

AdversarialSpec paper_adversarial() {
  AdversarialSpec s;
  s.spacing = SimTime::us(50);
  s.period = SimTime::us(140);
  s.red_offset_after_blue = SimTime::us(20);
  s.orange_offset_after_red2 = SimTime::us(10);
  return s;
}

std::vector<SimTime> times(const StreamSpec& spec, std::uint64_t period) {
  Rng rng(1);
  std::vector<SimTime> out;
  for (const auto& [t, f] : emit(spec, period, rng)) out.push_back(t);
  return out;
}

}  // namespace

TEST_SUITE("traffic") {

TEST_CASE("adversarial expansion") {
  const AdversarialStreams a = expand_adversarial(paper_adversarial());
  CHECK(times(a.blue, 0) ==
        std::vector<SimTime>{SimTime(), SimTime::us(50)});
  CHECK(times(a.red, 0) ==
        std::vector<SimTime>{SimTime::us(20), SimTime::us(70)});
  CHECK(times(a.orange, 0) ==
        std::vector<SimTime>{SimTime::us(80), SimTime::us(130)});
  CHECK(times(a.orange, 1) ==
        std::vector<SimTime>{SimTime::us(220), SimTime::us(270)});
}

TEST_CASE("adversarial expansion needs T < 3I") {
  AdversarialSpec s = paper_adversarial();
  s.period = SimTime::us(150);
  CHECK_THROWS_AS(expand_adversarial(s), std::invalid_argument);
}

TEST_CASE("cross traffic frame of period 3") {
  StreamSpec s;
  s.id = "green";
  s.frame_size_bits = 4000;
  s.period = SimTime::us(140);
  s.offsets = {SimTime()};
  Rng rng(7);
  const auto frames = emit(s, 3, rng, 4);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].first == SimTime::us(420));
  CHECK(frames[0].second.size_bits == 4000);
  CHECK(frames[0].second.seq == 3);
  CHECK(frames[0].second.stream == 4);
}

TEST_CASE("jitter stays within its bound on a nanosecond grid") {
  StreamSpec s;
  s.id = "video";
  s.frame_size_bits = 12000;
  s.period = SimTime::us(Rational(750, 11));
  s.offsets = {SimTime()};
  s.jitter_bound = SimTime::us(70);
  Rng rng(3);
  for (std::uint64_t k = 0; k < 2000; ++k) {
    const SimTime base = s.period * Rational(static_cast<std::int64_t>(k));
    const SimTime j = emit(s, k, rng)[0].first - base;
    CHECK_FALSE(j.is_negative());
    CHECK(j <= SimTime::us(70));
    CHECK(j.in_ns().is_integer());
  }
}

TEST_CASE("sources produce strictly increasing times") {
  StreamSpec s;
  s.id = "video";
  s.frame_size_bits = 12000;
  s.period = SimTime::us(10);
  s.offsets = {SimTime()};
  s.jitter_bound = SimTime::us(30);
  TrafficSource src(s, 0, 11);
  SimTime last = src.peek_time();
  src.pop();
  for (int i = 0; i < 5000; ++i) {
    const SimTime t = src.peek_time();
    CHECK(last < t);
    CHECK(src.pop().produced == t);
    last = t;
  }
}

TEST_CASE("uniform draw covers both ends") {
  Rng rng(5);
  bool low = false, high = false;
  for (int i = 0; i < 1000; ++i) {
    const auto v = uniform_below_inclusive(rng, 3);
    CHECK(v <= 3);
    low |= v == 0;
    high |= v == 3;
  }
  CHECK(low);
  CHECK(high);
}

TEST_CASE("TDMA blocker sizes its frame to the slot") {
  const StreamSpec s =
      tdma_blocker("tdma", SimTime::us(500), SimTime::us(50), BitRate::gbps(1),
                   "ctrl", "sink");
  CHECK(s.frame_size_bits == 50000);  // 6250 B
  CHECK(transmit_duration(s.frame_size_bits, BitRate::gbps(1)) ==
        SimTime::us(50));
  CHECK(s.priority == 7);
  CHECK(times(s, 2) == std::vector<SimTime>{SimTime::us(1000)});
}

TEST_CASE("zero TDMA slot emits nothing") {
  StreamSpec s = tdma_blocker("tdma", SimTime::us(500), SimTime(),
                              BitRate::gbps(1), "ctrl", "sink");
  CHECK(s.offsets.empty());
  CHECK(times(s, 0).empty());
  TrafficSource src(s, 0, 1);
  CHECK(src.exhausted());
}

TEST_CASE("stream validation") {
  StreamSpec s;
  s.id = "x";
  s.frame_size_bits = 100;
  s.period = SimTime::us(10);
  s.offsets = {SimTime::us(5), SimTime::us(5)};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.offsets = {SimTime::us(10)};
  CHECK_THROWS_AS(validate(s), std::invalid_argument);
  s.offsets = {SimTime::us(9)};
  CHECK_NOTHROW(validate(s));
}

}  // TEST_SUITE
