#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tarel/formula.hpp"

namespace tarel {

// Machines whose counters range over the naturals, are incremented or reset
// one at a time, and are guarded by comparisons against constants up to
// max_constant. Counters are 1-based, states are 0-based.

enum class CounterRel { lt, eq, gt };

struct CounterAtom {
  int counter;
  CounterRel rel;
  long long k;
  bool operator==(const CounterAtom&) const = default;
};

using CounterGuard = std::vector<CounterAtom>;  // conjunction, empty = true

struct CounterOp {
  enum class Kind { nop, inc, reset };
  Kind kind = Kind::nop;
  int counter = 0;  // unused for nop
  bool operator==(const CounterOp&) const = default;
};

inline CounterOp op_nop() { return {CounterOp::Kind::nop, 0}; }
inline CounterOp op_inc(int c) { return {CounterOp::Kind::inc, c}; }
inline CounterOp op_reset(int c) { return {CounterOp::Kind::reset, c}; }

struct McmEdge {
  int source = 0;
  CounterGuard guard;
  CounterOp op;
  int target = 0;
};

struct MonotonicCounterMachine {
  int state_count = 0;
  int counter_count = 0;
  std::vector<McmEdge> edges;
  long long max_constant = 0;
};

// Throws std::invalid_argument on out-of-range states, counters, or guard
// constants outside [0, max_constant].
void check_machine(const MonotonicCounterMachine& m);

std::string counter_guard_str(const CounterGuard& g);
std::string mcm_str(const MonotonicCounterMachine& m);

// Exact reachability between concrete configurations. Values are explored in
// [0, B] with one saturating class above, B = max(max_constant, max target
// coordinate); values above B are guard-indistinguishable and cannot match
// the target without an intervening reset.
bool mcm_point_reach(const MonotonicCounterMachine& m, int from_state,
                     const std::vector<long long>& from, int to_state,
                     const std::vector<long long>& to);

// Region abstraction of counter valuations: exact entries in [0, N], kRegInf
// for everything above N.
inline constexpr long long kRegInf = -1;
using RegionVector = std::vector<long long>;

RegionVector reg_of(const std::vector<long long>& vals, long long max_constant);
std::string reg_str(const RegionVector& r);

// NFA abstraction of machine runs. lam is a bitmask (bit i-1 for counter i)
// of the counters still awaiting their last reset; it only shrinks. Letter 0
// is epsilon, letter i reads one increment of counter i performed after that
// counter's last reset.
struct RegionNfaState {
  int state = 0;
  RegionVector reg;
  std::uint32_t lam = 0;
  bool operator==(const RegionNfaState&) const = default;
};

struct NfaTransition {
  int source = 0;
  int letter = 0;
  int target = 0;
};

struct RegionNFA {
  int counter_count = 0;
  std::vector<RegionNfaState> states;
  std::vector<NfaTransition> transitions;
  std::vector<int> initials;
  std::vector<int> finals;
};

// States reachable from (s, r, lam); finals are exactly (s2, r2, empty).
RegionNFA build_region_nfa(const MonotonicCounterMachine& m, int s,
                           const RegionVector& r, std::uint32_t lam, int s2,
                           const RegionVector& r2);

// Variant whose alphabet is restricted to increments of the reference counter
// c_n. Only c_n's last reset is tracked: reset_branch selects runs that reset
// c_n at least once, otherwise runs that never reset it. Other counters are
// handled by the region component alone.
RegionNFA build_region_nfa_unary(const MonotonicCounterMachine& m, int s,
                                 const RegionVector& r, bool reset_branch,
                                 int s2, const RegionVector& r2);

// Does the NFA accept a word with exactly the given letter counts?
bool nfa_parikh_member(const RegionNFA& nfa,
                       const std::vector<long long>& counts);

// Ultimately periodic sets of naturals: an explicit base below threshold plus
// arithmetic progressions whose offsets lie in [threshold, threshold+period).
struct SemilinearSet {
  long long threshold = 0;
  std::vector<long long> base;
  std::vector<std::pair<long long, long long>> progressions;  // (offset, period)

  bool empty() const { return base.empty() && progressions.empty(); }
  bool contains(long long x) const;
  std::string str() const;
};

// Word lengths of a unary NFA. The sequence of letter-step subset layers is
// eventually periodic; the first repeated layer gives the exact threshold and
// period.
SemilinearSet unary_length_semilinear(const RegionNFA& nfa);

// Existential Presburger characterization of the Parikh image, free in
// z1..zn: edge multiplicities with flow conservation plus per-state distance
// certificates tying the used subgraph to the entry state. Size is linear in
// the NFA.
FormulaPtr parikh_flow_formula(const RegionNFA& nfa);

// Same flow core, but letter count i is equated to the caller's term
// letter_lhs[i-1] instead of the variable zi.
FormulaPtr parikh_flow_formula_lhs(const RegionNFA& nfa,
                                   const std::vector<TermPtr>& letter_lhs);

// Reachability between machine states as an existential Presburger formula
// free in z1..zn (source values) and z1'..zn' (target values): a disjunction
// over source region, target region and reset set of region constraints
// conjoined with the matching flow formula, where counters reset along the
// run contribute zi' and never-reset counters contribute zi' - zi.
FormulaPtr reach_formula_mcm(const MonotonicCounterMachine& m, int s, int s2);

// Projection to the reference counter c_n: quantifier-free formula over zn
// and zn' describing which value pairs admit a run between the given region
// classes, assembled from the length sets of the two unary abstractions
// (c_n never reset: constraints on zn' - zn; c_n reset at least once:
// constraints on zn' alone).
FormulaPtr reference_reach_formula(const MonotonicCounterMachine& m, int s,
                                   const RegionVector& r, int s2,
                                   const RegionVector& r2);

}  // namespace tarel
