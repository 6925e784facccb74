#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tarel/rational.hpp"

namespace tarel {

// Bound domain: ({<, <=} x Q) plus (<, +inf). The order puts (<, m) below
// (<=, m); addition is strict unless both operands are nonstrict and
// saturates at infinity.
enum class Strictness { nonstrict, strict };

struct Bound {
  Strictness s = Strictness::nonstrict;
  bool inf = false;  // infinity is always strict
  Rat v;
};

Bound bound_le(Rat v);
Bound bound_lt(Rat v);
Bound bound_inf();

bool operator==(const Bound& a, const Bound& b);
bool operator!=(const Bound& a, const Bound& b);
bool bound_le_v(const Bound& a, const Bound& b);  // a <=_V b
bool bound_lt_v(const Bound& a, const Bound& b);
Bound bound_add(const Bound& a, const Bound& b);
Bound bound_min(const Bound& a, const Bound& b);
// diff satisfies the bound as an upper bound on a clock difference.
bool bound_admits(const Bound& b, const Rat& diff);
std::string bound_str(const Bound& b);

// Difference bound matrix over clocks x_1..x_n with x_0 = 0 at index 0.
// Entry (i,j) is an upper bound on x_i - x_j. The canonical flag is
// maintained by the operations below; is_consistent trusts it.
struct DBM {
  int n = 0;  // matrix is (n+1) x (n+1)
  std::vector<Bound> e;
  bool canonical = false;

  DBM() = default;
  explicit DBM(int clocks);
  Bound& at(int i, int j) { return e[static_cast<size_t>(i) * (n + 1) + j]; }
  const Bound& at(int i, int j) const {
    return e[static_cast<size_t>(i) * (n + 1) + j];
  }
};

bool operator==(const DBM& a, const DBM& b);  // entries only, flag ignored
bool operator!=(const DBM& a, const DBM& b);

// Zone with x_i >= 0 and no other constraints.
DBM universal_dbm(int n);

// Floyd-Warshall closure. Inconsistent inputs normalize to the all-(<,0)
// matrix, a canonical form that fails the diagonal test; this keeps the
// operation idempotent without a sentinel value.
DBM canonicalize(const DBM& m);

// Requires the canonical flag; true iff the zone is nonempty.
bool is_consistent(const DBM& m);

// Verifies the triangle inequality directly. Holds for every canonical
// consistent matrix; inconsistent flagged matrices may fail it.
bool triangle_ok(const DBM& m);

DBM time_elapse(const DBM& m);
DBM reset(const DBM& m, int i);  // i in 1..n
// Intersection with the atomic constraint x_p - x_q (bound b), p != q.
DBM intersect_atomic(const DBM& m, int p, int q, const Bound& b);

// Singleton zone for a valuation with entries in [0,1].
DBM dbm_of_valuation(const std::vector<Rat>& nu);

struct StructuralChecks {
  bool one_bounded = false;
  bool tight = false;
  bool well_supported = false;  // meaningful only when a valuation is given
};

// tight is judged against the reference clock x_n (the last index);
// well_supported asks every finite entry to be c + nu_a - nu_b with
// c in {-1,0,1} over the given valuation extended by nu_0 = 0.
StructuralChecks structural_checks(const DBM& m,
                                   const std::optional<std::vector<Rat>>& nu);

// nu has length n; membership in the zone (x_0 = 0 implicit).
bool dbm_member(const DBM& m, const std::vector<Rat>& nu);

// Matrix of "(<=|<, p/q | inf)" tokens, row-major, one row per line.
std::string dbm_str(const DBM& m);

}  // namespace tarel
