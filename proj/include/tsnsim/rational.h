// Exact rational arithmetic on 64-bit numerator/denominator pairs.
//
// Intermediate products are computed in 128 bits and the result is reduced
// before being narrowed back.  A result that does not fit into 64 bits after
// reduction throws std::overflow_error instead of wrapping.

#ifndef TSNSIM_RATIONAL_H_
#define TSNSIM_RATIONAL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace tsnsim {

class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den);

  // Accepts "12", "-3/4", "1.25", "2.5e-3".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  std::int64_t floor() const;
  std::int64_t ceil() const;
  double to_double() const;

  // "n" for integers, "n/d" otherwise.
  std::string str() const;
  // Exact decimal expansion; a repeating tail is written in parentheses,
  // e.g. "68181.(81)".  Falls back to "n/d" when the expansion needs more
  // than kMaxDecimalDigits fractional digits.
  std::string decimal_str() const;
  static constexpr std::size_t kMaxDecimalDigits = 64;

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;  // always > 0, gcd(num_, den_) == 1
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace tsnsim

#endif  // TSNSIM_RATIONAL_H_
