#include <doctest.h>

#include <stdexcept>

#include "tsnsim/rational.h"

using tsnsim::Rational;

TEST_SUITE("rational") {

TEST_CASE("construction reduces and normalizes the sign") {
  Rational r(6, -4);
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("ordering compares exactly") {
  CHECK(Rational(1, 3) < Rational(334, 1000));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(min(Rational(1, 3), Rational(1, 4)) == Rational(1, 4));
  CHECK(max(Rational(1, 3), Rational(1, 4)) == Rational(1, 3));
}

TEST_CASE("floor and ceil round toward the right infinity") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(4).floor() == 4);
}

TEST_CASE("overflow is reported instead of wrapping") {
  const Rational big(std::int64_t(1) << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(Rational(1, (std::int64_t(1) << 62) + 1) +
                      Rational(1, (std::int64_t(1) << 62) - 1),
                  std::overflow_error);
}

TEST_CASE("parse accepts integers, fractions, decimals and exponents") {
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("2.5e-3") == Rational(1, 400));
  CHECK(Rational::parse("1.5/0.5") == Rational(3));
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "e5", "1e", "0.(1"})
    CHECK_THROWS_AS(Rational::parse(bad), std::invalid_argument);
}

TEST_CASE("decimal rendering marks the repeating part") {
  CHECK(Rational(5).decimal_str() == "5");
  CHECK(Rational(5, 4).decimal_str() == "1.25");
  CHECK(Rational(-1, 3).decimal_str() == "-0.(3)");
  CHECK(Rational(1, 6).decimal_str() == "0.1(6)");
  CHECK(Rational(750000, 11).decimal_str() == "68181.(81)");
  CHECK(Rational(1, 7).decimal_str() == "0.(142857)");
}

TEST_CASE("decimal rendering round-trips through parse") {
  for (std::int64_t den : {2, 3, 7, 11, 12, 13, 44, 97, 176, 1000})
    for (std::int64_t num : {-25, -1, 1, 22, 750000, 1234567}) {
      const Rational r(num, den);
      CAPTURE(r.str());
      const std::string text = r.decimal_str();
      if (text.find('/') == std::string::npos)
        CHECK(Rational::parse(text) == r);
    }
}

TEST_CASE("long cycles fall back to a fraction") {
  const Rational r(1, 997);  // cycle of 166 digits
  CHECK(r.decimal_str() == "1/997");
  CHECK(Rational::parse(r.decimal_str()) == r);
}

}  // TEST_SUITE
