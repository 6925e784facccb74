#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <tarel/rational.hpp>

namespace tarel {

// Guard atoms constrain a single clock x_i against a natural constant k:
// x<k, x=k, k<x<k+1 (open_unit), x>=k, x>k. The gt kind survives parsing
// only; normalize_automaton eliminates it by splitting the edge into the
// open_unit(k) and ge(k+1) cases.
enum class GuardRel { lt, eq, open_unit, ge, gt };

struct GuardAtom {
  int clock = 0;  // 1-based
  GuardRel rel = GuardRel::lt;
  long long k = 0;
};

bool operator==(const GuardAtom& a, const GuardAtom& b);

// Conjunction of atoms; empty conjunction is "true".
using Guard = std::vector<GuardAtom>;

struct Edge {
  std::string source;
  Guard guard;
  std::vector<int> resets;  // ascending, 1-based
  std::string target;
};

struct TimedAutomaton {
  std::vector<std::string> locations;  // declaration order
  std::map<std::string, std::vector<std::string>> labels;
  int clock_count = 0;  // n; once a reference is designated it is clock n
  bool has_reference = false;
  std::vector<Edge> edges;
  long long max_constant = 0;  // N, largest guard constant
};

struct Config {
  std::string location;
  std::vector<Rat> val;
};

// Integer half of a split guard: atoms over the counter c_i.
enum class IntRel { le, eq, ge };

struct IntAtom {
  int counter = 0;
  IntRel rel = IntRel::eq;
  long long k = 0;  // k = -1 encodes the unsatisfiable c <= -1 from x < 0
};

// Fractional half: atoms over frac(x_i).
enum class FracRel { lt1, eq0, open01, ge0 };

struct FracAtom {
  int clock = 0;
  FracRel rel = FracRel::ge0;
};

struct GuardSplit {
  std::vector<IntAtom> int_part;
  std::vector<FracAtom> frac_part;
};

struct TaParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  TaParseError(int line, int column, const std::string& msg);
};

// Line-based format, '#' starts a comment:
//   clocks: x1 x2 ... [ref xN]
//   location NAME [p,q,...]
//   edge SRC -> DST guard "..." reset xI[,xJ...]
// Guard text is a "&"-joined conjunction of "xI<k", "xI=k", "k<xI<k+1",
// "xI>=k", "xI>k", or "true". Diagonal constraints and resets of the
// designated reference clock are rejected.
TimedAutomaton parse_timed_automaton(const std::string& text);

// Appends a fresh reference clock when none was designated, splits x>k
// guards into their open_unit / ge cases, and splits edges resetting more
// than one clock into chains through fresh locations. Later edges of a
// chain are guarded x=0 on the previously reset clock, which pins the
// whole chain to a single instant; configuration reachability restricted
// to the original locations is therefore preserved exactly.
TimedAutomaton normalize_automaton(const TimedAutomaton& ta);

// Splits a conjunction of normalized atoms into integer and fractional
// parts such that v |= g iff floor(v) |= int_part and frac(v) |= frac_part.
// Throws std::logic_error on a gt atom (normalize first).
GuardSplit decompose_guard(const Guard& g);

bool guard_sat(const Guard& g, const std::vector<Rat>& val);
bool int_sat(const std::vector<IntAtom>& atoms, const std::vector<long long>& floors);
bool frac_sat(const std::vector<FracAtom>& atoms, const std::vector<Rat>& fracs);

struct StepAction {
  enum class Kind { delay, edge };
  Kind kind = Kind::delay;
  Rat d;
  std::size_t edge = 0;
};

StepAction act_delay(const Rat& d);
StepAction act_edge(std::size_t edge_index);

// Delay adds d to every clock; an edge step checks source and guard,
// resets the listed clocks and moves to the target. Guard or source
// mismatch raises "edge not enabled".
Config concrete_step(const TimedAutomaton& ta, const Config& cfg, const StepAction& a);

std::string guard_str(const Guard& g);

}  // namespace tarel
