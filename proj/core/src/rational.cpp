#include "tarel/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace tarel {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rat Rat::make_reduced(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rat();
  i128 g = gcd128(n, d);
  n /= g;
  d /= g;
  if (!fits64(n) || !fits64(d)) throw ArithmeticOverflow();
  Rat r;
  r.num_ = (std::int64_t)n;
  r.den_ = (std::int64_t)d;
  return r;
}

Rat::Rat(std::int64_t n, std::int64_t d) { *this = make_reduced(n, d); }

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;  // int64 min never occurs in a reduced value we produced
  r.den_ = den_;
  if (num_ == std::numeric_limits<std::int64_t>::min()) throw ArithmeticOverflow();
  return r;
}

Rat Rat::operator+(const Rat& o) const {
  return make_reduced((i128)num_ * o.den_ + (i128)o.num_ * den_, (i128)den_ * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
  return make_reduced((i128)num_ * o.den_ - (i128)o.num_ * den_, (i128)den_ * o.den_);
}

Rat Rat::operator*(const Rat& o) const {
  return make_reduced((i128)num_ * o.num_, (i128)den_ * o.den_);
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return make_reduced((i128)num_ * o.den_, (i128)den_ * o.num_);
}

std::int64_t Rat::floor() const noexcept {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rat::ceil() const noexcept {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rat Rat::frac() const { return *this - Rat(floor()); }

std::string Rat::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) {
    s += '/';
    s += std::to_string(den_);
  }
  return s;
}

Rat Rat::parse(std::string_view s) {
  auto fail = [&] {
    throw std::invalid_argument("bad rational literal: '" + std::string(s) + "'");
  };
  if (s.empty()) fail();
  std::int64_t n = 0, d = 1;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, n);
  if (ec != std::errc()) fail();
  if (p != e) {
    if (*p != '/') fail();  // rejects decimals and trailing junk
    ++p;
    auto [p2, ec2] = std::from_chars(p, e, d);
    if (ec2 != std::errc() || p2 != e || d == 0) fail();
  }
  return Rat(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace tarel
