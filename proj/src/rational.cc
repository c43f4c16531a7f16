#include "tsnsim/rational.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>
#include <stdexcept>

namespace tsnsim {

namespace {

using u128 = unsigned __int128;

u128 abs128(__int128 v) { return v < 0 ? u128(-v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  constexpr u128 kMax64 = std::numeric_limits<std::uint64_t>::max();
  while (b != 0) {
    if (a <= kMax64 && b <= kMax64)
      return std::gcd(static_cast<std::uint64_t>(a),
                      static_cast<std::uint64_t>(b));
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g = gcd128(abs128(num), u128(den));
  if (g > 1) {
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
  }
  if (!fits64(num) || !fits64(den))
    throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" +
                                std::string(text) + "'");
  };
  std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    Rational n = parse(text.substr(0, slash));
    Rational d = parse(text.substr(slash + 1));
    if (d.is_zero()) fail();
    return n / d;
  }
  if (text.empty()) fail();

  // Repeating decimal "a.b(c)" = a.b + c / (10^|b| * (10^|c| - 1)).
  const std::size_t open = text.find('(');
  if (open != std::string_view::npos) {
    const std::size_t point = text.find('.');
    if (point == std::string_view::npos || point > open ||
        text.back() != ')' || open + 2 >= text.size())
      fail();
    const std::string_view cycle = text.substr(open + 1, text.size() - open - 2);
    if (cycle.size() > 18) fail();
    for (char c : cycle)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    const Rational head = parse(text.substr(0, open));
    std::int64_t nines = 0;
    for (std::size_t k = 0; k < cycle.size(); ++k) nines = nines * 10 + 9;
    Rational tail(std::stoll(std::string(cycle)), nines);
    for (std::size_t k = point + 1; k < open; ++k) tail = tail / 10;
    return text.front() == '-' ? head - tail : head + tail;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  __int128 mantissa = 0;
  std::int64_t scale = 0;  // power of ten applied to mantissa
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_point) --scale;
      seen_digit = true;
      if (mantissa > (__int128(1) << 100)) fail();
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  if (i < text.size()) {
    std::string exp(text.substr(i + 1));
    if (exp.empty()) fail();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != exp.size() || e > 30 || e < -30) fail();
    scale += e;
  }
  __int128 num = negative ? -mantissa : mantissa;
  __int128 den = 1;
  for (; scale > 0; --scale) num *= 10;
  for (; scale < 0; ++scale) den *= 10;
  return from_wide(num, den);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal_str() const {
  if (den_ == 1) return std::to_string(num_);
  const bool negative = num_ < 0;
  const u128 mag = abs128(__int128(num_));
  const u128 den = static_cast<u128>(den_);
  std::string out = negative ? "-" : "";
  u128 whole = mag / den;
  std::string int_digits;
  do {
    int_digits.insert(int_digits.begin(), char('0' + int(whole % 10)));
    whole /= 10;
  } while (whole > 0);
  out += int_digits + '.';

  // Long division; a repeated remainder starts the cycle.
  std::vector<std::pair<u128, std::size_t>> seen;
  std::string frac;
  u128 rem = mag % den;
  while (rem != 0) {
    for (const auto& [r, pos] : seen)
      if (r == rem)
        return out + frac.substr(0, pos) + '(' + frac.substr(pos) + ')';
    if (frac.size() >= kMaxDecimalDigits) return str();
    seen.emplace_back(rem, frac.size());
    rem *= 10;
    frac += char('0' + int(rem / den));
    rem %= den;
  }
  return out + frac;
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational overflow");
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational& Rational::operator+=(const Rational& other) {
  if (den_ == other.den_) {
    *this = from_wide(__int128(num_) + other.num_, den_);
    return *this;
  }
  std::int64_t g = std::gcd(den_, other.den_);
  __int128 num = __int128(num_) * (other.den_ / g) +
                 __int128(other.num_) * (den_ / g);
  __int128 den = __int128(den_ / g) * other.den_;
  *this = from_wide(num, den);
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  return *this += -other;
}

Rational& Rational::operator*=(const Rational& other) {
  std::int64_t g1 = std::gcd(num_, other.den_);
  std::int64_t g2 = std::gcd(other.num_, den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  __int128 num = __int128(num_ / g1) * (other.num_ / g2);
  __int128 den = __int128(den_ / g2) * (other.den_ / g1);
  *this = from_wide(num, den);
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.num_ == 0) throw std::domain_error("rational division by zero");
  Rational inv;
  inv.num_ = other.den_;
  inv.den_ = other.num_;
  if (inv.den_ < 0) {
    inv.num_ = -inv.num_;
    inv.den_ = -inv.den_;
  }
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  __int128 lhs = __int128(a.num_) * b.den_;
  __int128 rhs = __int128(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace tsnsim
