#include "tsnsim/units.h"

#include <array>
#include <cctype>
#include <stdexcept>
#include <utility>

namespace tsnsim {

namespace {

std::pair<std::string_view, std::string_view> split_suffix(
    std::string_view text) {
  std::size_t end = text.size();
  while (end > 0 && std::isalpha(static_cast<unsigned char>(text[end - 1])) &&
         text[end - 1] != 'e' && text[end - 1] != 'E')
    --end;
  // No unit contains 'e', so an exponent marker stays with the number.
  return {text.substr(0, end), text.substr(end)};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

SimTime SimTime::parse(std::string_view text) {
  text = trim(text);
  auto [number, unit] = split_suffix(text);
  number = trim(number);
  if (number.empty())
    throw std::invalid_argument("not a time value: '" + std::string(text) +
                                "'");
  Rational v = Rational::parse(number);
  if (unit == "s" || (unit.empty() && v.is_zero())) return seconds(v);
  if (unit == "ms") return ms(v);
  if (unit == "us") return us(v);
  if (unit == "ns") return ns(v);
  throw std::invalid_argument("time value needs a unit (s, ms, us, ns): '" +
                              std::string(text) + "'");
}

std::string SimTime::str() const {
  if (value_.is_zero()) return "0s";
  static constexpr std::array<std::pair<std::int64_t, const char*>, 4> kUnits{
      {{1, "s"}, {1000, "ms"}, {1000000, "us"}, {1000000000, "ns"}}};
  for (const auto& [scale, name] : kUnits) {
    Rational scaled = value_ * scale;
    if (scaled.is_integer()) return scaled.str() + name;
  }
  // Non-terminating in ns: keep the microsecond form, it is the most readable.
  return (value_ * 1000000).str() + "us";
}

OptionalTime parse_optional_time(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "infinite") return std::nullopt;
  return SimTime::parse(text);
}

std::string optional_time_str(const OptionalTime& t) {
  return t ? t->str() : "inf";
}

BitRate BitRate::parse(std::string_view text) {
  text = trim(text);
  auto [number, unit] = split_suffix(text);
  number = trim(number);
  if (number.empty())
    throw std::invalid_argument("not a rate: '" + std::string(text) + "'");
  Rational v = Rational::parse(number);
  BitRate r;
  if (unit == "bps")
    r = bps(v);
  else if (unit == "kbps")
    r = bps(v * 1000);
  else if (unit == "Mbps")
    r = mbps(v);
  else if (unit == "Gbps")
    r = gbps(v);
  else
    throw std::invalid_argument("rate needs a unit (bps, kbps, Mbps, Gbps): '" +
                                std::string(text) + "'");
  if (!(r.value_ > Rational(0)))
    throw std::invalid_argument("rate must be positive: '" +
                                std::string(text) + "'");
  return r;
}

std::string BitRate::str() const {
  static constexpr std::array<std::pair<std::int64_t, const char*>, 4> kUnits{
      {{1000000000, "Gbps"}, {1000000, "Mbps"}, {1000, "kbps"}, {1, "bps"}}};
  for (const auto& [scale, name] : kUnits) {
    Rational scaled = value_ / scale;
    if (scaled.is_integer()) return scaled.str() + name;
  }
  return value_.str() + "bps";
}

SimTime transmit_duration(std::int64_t size_bits, const BitRate& rate) {
  return SimTime::seconds(Rational(size_bits) / rate.bits_per_second());
}

Rational bits_over(const BitRate& rate, const SimTime& span) {
  return rate.bits_per_second() * span.in_seconds();
}

SimTime time_for_bits(const Rational& bits, const BitRate& rate) {
  return SimTime::seconds(bits / rate.bits_per_second());
}

}  // namespace tsnsim
