// Exact time and rate quantities used throughout the simulator.

#ifndef TSNSIM_UNITS_H_
#define TSNSIM_UNITS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tsnsim/rational.h"

namespace tsnsim {

// A point in simulated time (or a signed duration), in seconds.  Event
// ordering compares these exactly; no floating point is involved.
class SimTime {
 public:
  constexpr SimTime() = default;

  static SimTime seconds(const Rational& s) { return SimTime(s); }
  static SimTime ms(const Rational& v) { return SimTime(v / 1000); }
  static SimTime us(const Rational& v) { return SimTime(v / 1000000); }
  static SimTime ns(const Rational& v) { return SimTime(v / 1000000000); }

  // "140us", "10s", "750/11us", "1.5ms", "0".
  static SimTime parse(std::string_view text);

  const Rational& in_seconds() const { return value_; }
  Rational in_ns() const { return value_ * 1000000000; }
  double to_seconds_double() const { return value_.to_double(); }

  bool is_negative() const { return value_.is_negative(); }
  bool is_zero() const { return value_.is_zero(); }

  // Shortest exact rendering in s/ms/us/ns, parseable by parse().
  std::string str() const;

  SimTime& operator+=(const SimTime& o) {
    value_ += o.value_;
    return *this;
  }
  SimTime& operator-=(const SimTime& o) {
    value_ -= o.value_;
    return *this;
  }
  friend SimTime operator+(SimTime a, const SimTime& b) { return a += b; }
  friend SimTime operator-(SimTime a, const SimTime& b) { return a -= b; }
  friend SimTime operator*(const SimTime& a, const Rational& k) {
    return SimTime(a.value_ * k);
  }
  friend SimTime operator*(const Rational& k, const SimTime& a) {
    return SimTime(a.value_ * k);
  }
  friend Rational operator/(const SimTime& a, const SimTime& b) {
    return a.value_ / b.value_;
  }

  friend bool operator==(const SimTime&, const SimTime&) = default;
  friend std::strong_ordering operator<=>(const SimTime& a, const SimTime& b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit SimTime(const Rational& v) : value_(v) {}
  Rational value_;
};

// Absent value means "infinite" (used for mrt).
using OptionalTime = std::optional<SimTime>;
OptionalTime parse_optional_time(std::string_view text);  // "inf" -> nullopt
std::string optional_time_str(const OptionalTime& t);

// Link or token rate in bits per second.
class BitRate {
 public:
  constexpr BitRate() = default;
  static BitRate bps(const Rational& v) { return BitRate(v); }
  static BitRate mbps(const Rational& v) { return BitRate(v * 1000000); }
  static BitRate gbps(const Rational& v) { return BitRate(v * 1000000000); }

  // "100Mbps", "1Gbps", "176Mbps", "250kbps".
  static BitRate parse(std::string_view text);

  const Rational& bits_per_second() const { return value_; }
  std::string str() const;

  friend BitRate operator*(const BitRate& r, const Rational& k) {
    return BitRate(r.value_ * k);
  }
  friend bool operator==(const BitRate&, const BitRate&) = default;
  friend std::strong_ordering operator<=>(const BitRate& a, const BitRate& b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit BitRate(const Rational& v) : value_(v) {}
  Rational value_;
};

// Exact serialization time of `size_bits` at `rate`.
SimTime transmit_duration(std::int64_t size_bits, const BitRate& rate);

// Bits accumulated at `rate` over `span`.
Rational bits_over(const BitRate& rate, const SimTime& span);

// Time needed to accumulate `bits` at `rate`.
SimTime time_for_bits(const Rational& bits, const BitRate& rate);

}  // namespace tsnsim

#endif  // TSNSIM_UNITS_H_
