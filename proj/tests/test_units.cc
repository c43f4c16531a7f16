#include <doctest.h>

#include <stdexcept>

#include "tsnsim/units.h"

using namespace tsnsim;

TEST_SUITE("units") {

TEST_CASE("time parsing and rendering") {
  CHECK(SimTime::parse("140us") == SimTime::us(140));
  CHECK(SimTime::parse("10s") == SimTime::seconds(10));
  CHECK(SimTime::parse("1.5ms") == SimTime::us(1500));
  CHECK(SimTime::parse("750/11us") == SimTime::us(Rational(750, 11)));
  CHECK(SimTime::parse("0") == SimTime());
  CHECK(SimTime::us(140).str() == "140us");
  CHECK(SimTime::seconds(10).str() == "10s");
  CHECK(SimTime::parse(SimTime::us(Rational(750, 11)).str()) ==
        SimTime::us(Rational(750, 11)));
  CHECK_THROWS_AS(SimTime::parse("12 parsecs"), std::invalid_argument);
}

TEST_CASE("optional times use inf for the absent value") {
  CHECK_FALSE(parse_optional_time("inf").has_value());
  CHECK(*parse_optional_time("1ms") == SimTime::ms(1));
  CHECK(optional_time_str(std::nullopt) == "inf");
  CHECK(optional_time_str(SimTime::ms(1)) == "1ms");
}

TEST_CASE("bit rates") {
  CHECK(BitRate::parse("100Mbps") == BitRate::mbps(100));
  CHECK(BitRate::parse("1Gbps") == BitRate::gbps(1));
  CHECK(BitRate::parse("250kbps") == BitRate::bps(250000));
  CHECK(BitRate::parse(BitRate::mbps(176).str()) == BitRate::mbps(176));
}

TEST_CASE("serialization times") {
  CHECK(transmit_duration(1000, BitRate::mbps(100)) == SimTime::us(10));
  CHECK(transmit_duration(4000, BitRate::mbps(100)) == SimTime::us(40));
  CHECK(transmit_duration(12000, BitRate::gbps(1)) == SimTime::us(12));
}

TEST_CASE("video period is an exact rational") {
  // 12000 bits at 176 Mbit/s: 12000 / 176e6 s = 3/44000 s = 750/11 us.
  const SimTime period = transmit_duration(12000, BitRate::mbps(176));
  CHECK(period.in_seconds() == Rational(3, 44000));
  CHECK(period == SimTime::parse("750/11us"));
  CHECK(period.in_ns().decimal_str() == "68181.(81)");
}

TEST_CASE("bits and time convert both ways") {
  CHECK(bits_over(BitRate::mbps(20), SimTime::us(25)) == Rational(500));
  CHECK(time_for_bits(Rational(1000), BitRate::mbps(20)) == SimTime::us(50));
}

}  // TEST_SUITE
