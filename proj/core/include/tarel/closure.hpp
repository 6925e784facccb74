#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tarel/dbm.hpp"
#include "tarel/types.hpp"

namespace tarel {

// Time elapse clamped back into the unit cube: elapse then x_i <= 1 for
// every clock.
DBM relativized_elapse(const DBM& m);

// (m with x_i pinned to 1), then x_i reset to 0.
DBM wrap_clock(const DBM& m, int i);

// How a closure member was first produced; parent indexes into members.
struct ClosureStep {
  enum class Kind { seed, atom, elapse, reset, wrap } kind =
      Kind::seed;
  int parent = -1;
  int p = 0, q = 0;  // atom endpoints
  Bound b;           // atom bound
  int clock = 0;     // reset clock
};

struct ClosureSet {
  DBM seed;
  std::vector<DBM> members;           // discovery (FIFO) order, seed first
  std::vector<ClosureStep> produced;  // parallel to members
  std::optional<NType> tau;           // set when seeded parametrically
};

enum class ClosureMode { concrete, parametric };

// Fixpoint of the four rules: integer-constant atomic intersections
// (constants -1,0,1 cover the rest on 1-bounded matrices), relativized
// elapse, reset of non-reference clocks, and wrap of the reference clock.
// Inconsistent results are discarded; members deduplicate by canonical
// entry equality. Seeds must be canonical, consistent, and 1-bounded.
ClosureSet compute_closure(const DBM& seed, ClosureMode mode);
ClosureSet compute_closure(const ParametricDBM& pd);

// One matrix per block in the debug format, lexicographically sorted.
std::string closure_dump(const ClosureSet& cs);

}  // namespace tarel
