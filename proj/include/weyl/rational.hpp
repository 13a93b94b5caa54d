#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "weyl/errors.hpp"

namespace weyl {

// Exact rational on 64-bit words, always normalized (gcd 1, positive
// denominator).  Intermediates go through 128-bit products; anything that
// would not reduce back into 64 bits throws OverflowError rather than
// silently wrapping.  Root-system data keeps tiny denominators (1, 2, 4),
// so overflow only matters for things like huge Weyl dimensions.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d) {
    if (d == 0) throw ValidationError("Rat: zero denominator");
    norm_from(n, d);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const { return double(num_) / double(den_); }

  friend Rat operator-(const Rat& a) { return Rat(-a.num_, a.den_, raw_tag{}); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    i128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    i128 d = i128(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw ValidationError("Rat: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  // "p/q", or just "p" for integers.
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  // Accepts "p" or "p/q".
  static Rat parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ValidationError("Rat: cannot parse '" + s + "'");
    }
  }

 private:
  using i128 = __int128;
  struct raw_tag {};
  Rat(std::int64_t n, std::int64_t d, raw_tag) : num_(n), den_(d) {}

  static Rat make(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim)
      throw OverflowError("Rat: value exceeds 64-bit range");
    return Rat(std::int64_t(n), std::int64_t(d), raw_tag{});
  }

  void norm_from(std::int64_t n, std::int64_t d) {
    Rat r = make(n, d);
    num_ = r.num_;
    den_ = r.den_;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }

struct RatHash {
  std::size_t operator()(const Rat& r) const {
    std::size_t h = std::hash<std::int64_t>{}(r.num());
    h ^= std::hash<std::int64_t>{}(r.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace weyl
