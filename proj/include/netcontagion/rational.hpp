#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace netcontagion {

// Exact rational with 64-bit numerator/denominator. Every operation is carried
// out in 128-bit intermediates, reduced, and checked: a result that does not fit
// back into 64 bits throws InvariantError instead of wrapping.
class Rational {
 public:
  using int_type = std::int64_t;
  using wide_type = __int128;

  constexpr Rational() noexcept = default;
  constexpr Rational(int_type value) noexcept : num_(value), den_(1) {}  // NOLINT: implicit by design of arithmetic types
  Rational(int_type num, int_type den) { assign(num, den); }

  static Rational from_wide(wide_type num, wide_type den) {
    Rational r;
    r.assign_wide(num, den);
    return r;
  }

  // Accepts "3", "-3", "3/4" and plain decimals like "0.75" (no exponents).
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    if (text.empty()) throw ParseError("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(trim(text.substr(0, slash)), text), parse_int(trim(text.substr(slash + 1)), text));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      bool negative = !whole.empty() && whole.front() == '-';
      if (negative || (!whole.empty() && whole.front() == '+')) whole.remove_prefix(1);
      if (frac.size() > 18 || (whole.empty() && frac.empty())) throw ParseError("bad decimal '" + std::string(text) + "'");
      int_type w = whole.empty() ? 0 : parse_int(whole, text);
      int_type f = frac.empty() ? 0 : parse_int(frac, text);
      if (w < 0 || f < 0) throw ParseError("bad decimal '" + std::string(text) + "'");
      wide_type scale = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
      wide_type num = static_cast<wide_type>(w) * scale + f;
      return from_wide(negative ? -num : num, scale);
    }
    return Rational(parse_int(text, text));
  }

  constexpr int_type num() const noexcept { return num_; }
  constexpr int_type den() const noexcept { return den_; }
  constexpr bool is_zero() const noexcept { return num_ == 0; }
  constexpr bool is_negative() const noexcept { return num_ < 0; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Decimal rendering rounded half-to-even at `places` digits.
  std::string to_decimal(int places = 6) const {
    wide_type scale = 1;
    for (int k = 0; k < places; ++k) scale *= 10;
    wide_type n = num_ < 0 ? -static_cast<wide_type>(num_) : static_cast<wide_type>(num_);
    wide_type scaled = n * scale;
    wide_type q = scaled / den_;
    wide_type r = scaled % den_;
    if (2 * r > den_ || (2 * r == den_ && (q % 2) == 1)) ++q;
    std::string digits = wide_to_string(q);
    if (places > 0) {
      if (digits.size() <= static_cast<std::size_t>(places)) digits.insert(0, places + 1 - digits.size(), '0');
      digits.insert(digits.size() - places, ".");
    }
    if (num_ < 0 && q != 0) digits.insert(0, "-");
    return digits;
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(static_cast<wide_type>(a.num_) + b.num_, a.den_);
    return from_wide(static_cast<wide_type>(a.num_) * b.den_ + static_cast<wide_type>(b.num_) * a.den_,
                     static_cast<wide_type>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<wide_type>(a.num_) * b.num_, static_cast<wide_type>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvariantError("rational division by zero");
    return from_wide(static_cast<wide_type>(a.num_) * b.den_, static_cast<wide_type>(a.den_) * b.num_);
  }
  Rational operator-() const {
    if (num_ == std::numeric_limits<int_type>::min()) throw InvariantError("rational overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend constexpr bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    return static_cast<wide_type>(a.num_) * b.den_ <=> static_cast<wide_type>(b.num_) * a.den_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  static int_type parse_int(std::string_view s, std::string_view whole) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    int_type v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ParseError("bad rational '" + std::string(whole) + "'");
    return v;
  }

  static std::string wide_to_string(wide_type v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
      out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return out;
  }

  static wide_type wide_gcd(wide_type a, wide_type b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      wide_type t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(int_type num, int_type den) { assign_wide(num, den); }

  void assign_wide(wide_type num, wide_type den) {
    if (den == 0) throw InvariantError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    wide_type g = wide_gcd(num, den);
    num /= g;
    den /= g;
    constexpr wide_type hi = std::numeric_limits<int_type>::max();
    if (num > hi || num < -hi || den > hi) throw InvariantError("rational overflow");
    num_ = static_cast<int_type>(num);
    den_ = static_cast<int_type>(den);
  }

  int_type num_ = 0;
  int_type den_ = 1;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

}  // namespace netcontagion
