#pragma once

#include <algorithm>
#include <cstdint>
#include <compare>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairsched {

class overflow_error : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

// Exact rational with 64-bit numerator and positive denominator, always reduced.
// Intermediate products go through __int128 and throw on overflow.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integer
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  // Largest integer <= value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_,
                     static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  // Accepts "12", "-3", "3.5", "0.125" and "7/2". Exponent notation is rejected.
  static Rational parse(std::string_view text);

  // Exact text: decimal when the expansion terminates (denominator 2^a 5^b), else "p/q".
  std::string to_string() const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

private:
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    from_wide_into(*this, n, d);
  }

  static Rational from_wide(__int128 n, __int128 d) {
    Rational r;
    from_wide_into(r, n, d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static void from_wide_into(Rational& r, __int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw overflow_error("rational overflow");
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a number: '" + std::string(text) + "'"); };
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) fail();
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail();
    __int128 v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail();
      v = v * 10 + (c - '0');
      if (v > INT64_MAX) throw overflow_error("integer literal too large");
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  };

  std::string_view s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto den_text = trim(s.substr(slash + 1));
    if (den_text.empty() || den_text.front() == '-' || den_text.front() == '+') fail();
    const std::int64_t den = parse_int(den_text);
    if (den == 0) fail();
    return Rational(parse_int(trim(s.substr(0, slash))), den);
  }
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(s));

  std::string_view whole = s.substr(0, dot);
  std::string_view frac = s.substr(dot + 1);
  bool neg = !whole.empty() && whole.front() == '-';
  if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
  if (whole.empty() && frac.empty()) fail();
  if (frac.size() > 18) fail();
  if (!frac.empty() && (frac.front() == '-' || frac.front() == '+')) fail();
  if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) fail();
  std::int64_t w = whole.empty() ? 0 : parse_int(whole);
  std::int64_t f = frac.empty() ? 0 : parse_int(frac);
  std::int64_t scale = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
  Rational r = Rational(w) + Rational(f, scale);
  return neg ? -r : r;
}

inline std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  int digits = std::max(twos, fives);
  if (d != 1 || digits > 18) return std::to_string(num_) + "/" + std::to_string(den_);

  __int128 scaled = static_cast<__int128>(num_ < 0 ? -num_ : num_);
  __int128 mult = 1;
  for (int k = 0; k < digits; ++k) mult *= 10;
  scaled = scaled * mult / den_;
  __int128 ip = scaled / mult;
  __int128 fp = scaled % mult;
  std::string fs;
  for (int k = 0; k < digits; ++k) {
    fs.insert(fs.begin(), static_cast<char>('0' + static_cast<int>(fp % 10)));
    fp /= 10;
  }
  return std::string(num_ < 0 ? "-" : "") + std::to_string(static_cast<std::int64_t>(ip)) + "." + fs;
}

}  // namespace fairsched
