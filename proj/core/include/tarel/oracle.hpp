#pragma once

#include "tarel/ta.hpp"

namespace tarel {

// Brute-force search space: clock values are multiples of 1/denominator,
// capped just above int_cap so that larger values collapse onto a single
// guard-saturating top value.
struct GridParams {
  long long denominator = 1;
  long long int_cap = 0;
  long long step_budget = 50'000'000;  // visited-configuration limit
};

// BFS over grid-valued configurations. Delays advance every clock by one
// grid unit; edges follow the automaton with exact guard evaluation below
// the top value. Sound and complete for endpoints on the grid: delays
// split at integer boundaries keep every fractional part on the grid, so
// some witness run is grid-valued whenever any run exists.
// Throws std::invalid_argument for endpoints off the grid or above the
// cap, std::runtime_error when the grid exceeds the step budget.
bool grid_reach(const TimedAutomaton& ta, const Config& from,
                const Config& to, const GridParams& gp);

}  // namespace tarel
