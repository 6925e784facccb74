#include "tarel/dbm.hpp"

#include <sstream>
#include <stdexcept>

namespace tarel {

Bound bound_le(Rat v) { return Bound{Strictness::nonstrict, false, v}; }
Bound bound_lt(Rat v) { return Bound{Strictness::strict, false, v}; }
Bound bound_inf() { return Bound{Strictness::strict, true, Rat(0)}; }

bool operator==(const Bound& a, const Bound& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.s == b.s && a.v == b.v;
}
bool operator!=(const Bound& a, const Bound& b) { return !(a == b); }

bool bound_le_v(const Bound& a, const Bound& b) {
  if (b.inf) return true;
  if (a.inf) return false;
  if (a.v != b.v) return a.v < b.v;
  return !(a.s == Strictness::nonstrict && b.s == Strictness::strict);
}

bool bound_lt_v(const Bound& a, const Bound& b) { return !bound_le_v(b, a); }

Bound bound_add(const Bound& a, const Bound& b) {
  if (a.inf || b.inf) return bound_inf();
  const bool weak =
      a.s == Strictness::nonstrict && b.s == Strictness::nonstrict;
  return Bound{weak ? Strictness::nonstrict : Strictness::strict, false,
               a.v + b.v};
}

Bound bound_min(const Bound& a, const Bound& b) {
  return bound_le_v(a, b) ? a : b;
}

bool bound_admits(const Bound& b, const Rat& diff) {
  if (b.inf) return true;
  return b.s == Strictness::strict ? diff < b.v : !(b.v < diff);
}

std::string bound_str(const Bound& b) {
  std::string out = "(";
  out += b.s == Strictness::strict ? "<" : "<=";
  out += ", ";
  out += b.inf ? "inf" : b.v.str();
  out += ")";
  return out;
}

DBM::DBM(int clocks) : n(clocks) {
  if (clocks < 1) throw std::invalid_argument("DBM: need at least one clock");
  e.assign(static_cast<size_t>(n + 1) * (n + 1), Bound{});
}

bool operator==(const DBM& a, const DBM& b) {
  return a.n == b.n && a.e == b.e;
}
bool operator!=(const DBM& a, const DBM& b) { return !(a == b); }

DBM universal_dbm(int n) {
  DBM m(n);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j || i == 0)
        m.at(i, j) = bound_le(Rat(0));
      else
        m.at(i, j) = bound_inf();
    }
  m.canonical = true;
  return m;
}

namespace {

void require_canonical(const DBM& m, const char* op) {
  if (!m.canonical)
    throw std::logic_error(std::string(op) + ": input not canonical");
}

bool diagonal_ok(const DBM& m) {
  const Bound zero = bound_le(Rat(0));
  for (int i = 0; i <= m.n; ++i)
    if (bound_lt_v(m.at(i, i), zero)) return false;
  return true;
}

}  // namespace

DBM canonicalize(const DBM& m) {
  DBM r = m;
  const Bound zero = bound_le(Rat(0));
  for (int i = 0; i <= r.n; ++i)
    r.at(i, i) = bound_min(r.at(i, i), zero);
  for (int k = 0; k <= r.n; ++k)
    for (int i = 0; i <= r.n; ++i)
      for (int j = 0; j <= r.n; ++j) {
        const Bound cand = bound_add(r.at(i, k), r.at(k, j));
        if (bound_lt_v(cand, r.at(i, j))) r.at(i, j) = cand;
      }
  if (!diagonal_ok(r)) {
    for (auto& b : r.e) b = bound_lt(Rat(0));
  }
  r.canonical = true;
  return r;
}

bool is_consistent(const DBM& m) {
  require_canonical(m, "is_consistent");
  return diagonal_ok(m);
}

bool triangle_ok(const DBM& m) {
  for (int i = 0; i <= m.n; ++i)
    for (int j = 0; j <= m.n; ++j)
      for (int k = 0; k <= m.n; ++k)
        if (!bound_le_v(m.at(i, j), bound_add(m.at(i, k), m.at(k, j))))
          return false;
  return true;
}

DBM time_elapse(const DBM& m) {
  require_canonical(m, "time_elapse");
  DBM r = m;
  for (int i = 1; i <= r.n; ++i) r.at(i, 0) = bound_inf();
  return r;
}

DBM reset(const DBM& m, int i) {
  require_canonical(m, "reset");
  if (i < 1 || i > m.n) throw std::invalid_argument("reset: bad clock index");
  DBM r = m;
  auto sub = [i](int k) { return k == i ? 0 : k; };
  for (int a = 0; a <= m.n; ++a)
    for (int b = 0; b <= m.n; ++b) r.at(a, b) = m.at(sub(a), sub(b));
  return r;
}

DBM intersect_atomic(const DBM& m, int p, int q, const Bound& b) {
  require_canonical(m, "intersect_atomic");
  if (p == q || p < 0 || q < 0 || p > m.n || q > m.n)
    throw std::invalid_argument("intersect_atomic: bad clock pair");
  DBM r = m;
  for (int i = 0; i <= m.n; ++i)
    for (int j = 0; j <= m.n; ++j) {
      const Bound cand =
          bound_add(bound_add(m.at(i, p), b), m.at(q, j));
      r.at(i, j) = bound_min(m.at(i, j), cand);
    }
  return r;
}

DBM dbm_of_valuation(const std::vector<Rat>& nu) {
  const int n = static_cast<int>(nu.size());
  if (n < 1) throw std::invalid_argument("dbm_of_valuation: empty valuation");
  for (const auto& v : nu)
    if (v < Rat(0) || Rat(1) < v)
      throw std::invalid_argument("dbm_of_valuation: entry outside [0,1]");
  auto val = [&](int i) { return i == 0 ? Rat(0) : nu[i - 1]; };
  DBM m(n);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m.at(i, j) = bound_le(val(i) - val(j));
  m.canonical = true;
  return m;
}

StructuralChecks structural_checks(const DBM& m,
                                   const std::optional<std::vector<Rat>>& nu) {
  StructuralChecks out;
  out.one_bounded = true;
  for (const auto& b : m.e)
    if (!b.inf && (b.v < Rat(-1) || Rat(1) < b.v)) out.one_bounded = false;

  const int ref = m.n;
  out.tight = true;
  for (int i = 0; i <= m.n; ++i)
    for (int j = 0; j <= m.n; ++j) {
      const Bound& b = m.at(i, j);
      if (b.inf || b.v.is_integer()) continue;
      if (b != bound_add(m.at(i, ref), m.at(ref, j))) out.tight = false;
    }

  if (nu) {
    if (static_cast<int>(nu->size()) != m.n)
      throw std::invalid_argument("structural_checks: valuation arity");
    auto val = [&](int i) { return i == 0 ? Rat(0) : (*nu)[i - 1]; };
    out.well_supported = true;
    for (const auto& b : m.e) {
      if (b.inf) continue;
      bool hit = false;
      for (int a = 0; a <= m.n && !hit; ++a)
        for (int c = 0; c <= m.n && !hit; ++c)
          for (int k = -1; k <= 1 && !hit; ++k)
            if (b.v == Rat(k) + val(a) - val(c)) hit = true;
      if (!hit) out.well_supported = false;
    }
  }
  return out;
}

bool dbm_member(const DBM& m, const std::vector<Rat>& nu) {
  if (static_cast<int>(nu.size()) != m.n)
    throw std::invalid_argument("dbm_member: valuation arity");
  auto val = [&](int i) { return i == 0 ? Rat(0) : nu[i - 1]; };
  for (int i = 0; i <= m.n; ++i)
    for (int j = 0; j <= m.n; ++j)
      if (!bound_admits(m.at(i, j), val(i) - val(j))) return false;
  return true;
}

std::string dbm_str(const DBM& m) {
  std::ostringstream os;
  for (int i = 0; i <= m.n; ++i) {
    for (int j = 0; j <= m.n; ++j) {
      if (j) os << ' ';
      os << bound_str(m.at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tarel
