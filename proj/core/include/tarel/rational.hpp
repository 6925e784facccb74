#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tarel {

// Thrown when a reduced numerator or denominator no longer fits in 64 bits.
// All intermediate products are computed in 128 bits, so overflow is detected
// exactly rather than wrapping.
struct ArithmeticOverflow : std::runtime_error {
  ArithmeticOverflow() : std::runtime_error("rational arithmetic overflow") {}
};

// Exact rational with int64 numerator/denominator, always normalized:
// den > 0 and gcd(|num|, den) = 1.
class Rat {
 public:
  constexpr Rat() noexcept : num_(0), den_(1) {}
  Rat(std::int64_t n) noexcept : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }

  Rat operator-() const;
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;  // throws std::domain_error on o == 0

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) noexcept { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) noexcept {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) noexcept { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) noexcept { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) noexcept { return !(a < b); }

  int sign() const noexcept { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }
  Rat abs() const { return num_ < 0 ? -*this : *this; }

  // Largest integer <= value (true floor, also for negatives).
  std::int64_t floor() const noexcept;
  std::int64_t ceil() const noexcept;
  // Fractional part, value - floor(value), always in [0,1).
  Rat frac() const;

  // "p/q" when den != 1, plain "p" otherwise.
  std::string str() const;

  // Accepts an optionally signed integer "p" or fraction "p/q" (q > 0 after
  // sign normalization). Decimal notation is rejected by design: input
  // formats are exact.
  static Rat parse(std::string_view s);

 private:
  std::int64_t num_;
  std::int64_t den_;

  static Rat make_reduced(__int128 n, __int128 d);
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

// min/max by value.
inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace tarel
