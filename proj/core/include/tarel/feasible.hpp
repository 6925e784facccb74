#pragma once

#include <cstdint>
#include <vector>

#include "tarel/rational.hpp"

namespace tarel {

// Linear constraint sum_k coeff[k] * r_{k+1}  REL  rhs over variables
// r_1..r_n, each implicitly bounded to [0,1].
enum class RelOp { lt, eq, gt };

struct LinConstraint {
  std::vector<std::int64_t> coeff;  // length n
  RelOp rel;
  Rat rhs;
};

struct FeasResult {
  bool ok = false;
  std::vector<Rat> witness;  // length n when ok; strict constraints hold strictly
};

// Exact Fourier-Motzkin with strict/nonstrict bookkeeping. The witness is
// read back by substituting eliminated variables at interval midpoints, so
// it always lies in the relative interior of the solution set.
FeasResult feasible(int n, const std::vector<LinConstraint>& constraints);

}  // namespace tarel
