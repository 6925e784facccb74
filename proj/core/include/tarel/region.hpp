#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tarel/closure.hpp"
#include "tarel/mcm.hpp"
#include "tarel/ta.hpp"
#include "tarel/types.hpp"

namespace tarel {

// Provenance of a machine edge: time passing inside the unit cube, a clock
// wrapping past an integer boundary, or an automaton edge firing.
enum class RmEdgeKind { delay, wrapping, discrete };

struct RmEdgeTag {
  RmEdgeKind kind = RmEdgeKind::delay;
  int clock = 0;             // wrapping: wrapped clock; discrete: reset clock
  std::size_t ta_edge = 0;   // discrete only: index into the automaton's edges
};

// Counter machine whose states are (location, zone) pairs. Counters carry
// the integer parts of the clocks; the zones constrain the fractional
// parts. For a parametric build the zones hold the values at the type's
// witness and tau records how to read their entries.
struct RegionMachine {
  MonotonicCounterMachine machine;
  std::vector<int> state_location;  // per machine state
  std::vector<DBM> state_dbm;       // per machine state
  std::vector<RmEdgeTag> edge_tags; // parallel to machine.edges
  int initial = -1;
  std::vector<std::string> locations;  // copied from the automaton
  std::optional<NType> tau;            // set by the parametric build
};

struct RegionBuildOptions {
  // Default: generate only states forward-reachable from the initial
  // state. The full product locations x closure is what the figure
  // regressions inspect.
  bool full_product = false;
};

// Machine for runs out of (loc, nu). Seed zone is the singleton of
// frac(nu); initial counters for queries are floor(nu). Requires a
// normalized automaton (designated reference, no x>k guards, single
// resets) and nu >= 0 of matching arity.
RegionMachine build_concrete_machine(const TimedAutomaton& ta,
                                     const std::string& loc,
                                     const std::vector<Rat>& nu,
                                     const RegionBuildOptions& opt = {});

// Machine for runs out of (loc, nu) for every nu of type tau at once.
// Runs the same construction on the parametric seed; per-state zones
// instantiate to the concrete machine's zones at any inhabitant.
RegionMachine build_parametric_machine(const TimedAutomaton& ta,
                                       const std::string& loc,
                                       const NType& tau,
                                       const RegionBuildOptions& opt = {});

// Integer parts, for seeding machine queries.
std::vector<long long> floor_of(const std::vector<Rat>& nu);
// Fractional parts, for zone membership checks.
std::vector<Rat> frac_of(const std::vector<Rat>& nu);

// Index of the machine state with this location and zone, -1 if absent.
int find_state(const RegionMachine& rm, const std::string& loc, const DBM& m);

// MCM-format dump preceded by one "state I: (location, DBM block)" header
// per state.
std::string region_machine_str(const RegionMachine& rm);

}  // namespace tarel
