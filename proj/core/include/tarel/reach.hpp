#pragma once

#include <string>
#include <vector>

#include "tarel/formula.hpp"
#include "tarel/region.hpp"
#include "tarel/ta.hpp"
#include "tarel/types.hpp"

namespace tarel {

// One order type's slice of the reachability relation between two
// locations: the order-type formula over the source fractional parts, the
// counter machine grown from the type's parametric seed zone, the machine
// states carrying the target location, and per target the zone-membership
// constraints on the primed fractional parts (parametric entries rendered
// as difference terms over the unprimed ones).
struct ReachComponent {
  NType tau;
  RegionMachine machine;
  std::vector<int> targets;
  std::vector<FormulaPtr> memberships;  // parallel to targets
  FormulaPtr alpha;
  FormulaPtr chi;  // set only when the bundle is materialized
};

struct ReachOptions {
  int jobs = 1;             // worker threads for the per-type synthesis
  bool materialize = true;  // assemble the formula text, not just the parts
  // Also conjoin, per target state, the reference-clock projection of the
  // counter reachability: region constraints on the non-reference integer
  // parts plus semilinear length constraints tying z{n}' to z{n}. Implied
  // by the flow encoding, so the relation is unchanged; it makes the
  // periodicities explicit in the emitted text.
  bool reference_projection = false;
};

// phi_{l,l'} with free variables z1..zn, r1..rn, z1'..zn', r1'..rn'. The
// components stay alongside the assembled disjunction so point queries can
// route the integer part through the machine instead of the flow encoding.
struct ReachFormulaBundle {
  std::string from_loc;
  std::string to_loc;
  int clock_count = 0;
  std::vector<ReachComponent> components;  // sorted by type key
  FormulaPtr formula;        // or over (and alpha chi); materialized only
  long long node_count = 0;  // dag nodes of the assembled formula
  long long envelope = 0;    // asserted size ceiling, exponential in n only
};

// Conjunction of the order constraints a valuation of the given type
// places on the difference terms: t <= t' when the type orders the pair
// that way, not(t <= t') otherwise. Satisfied by exactly the fractional
// valuations of that type.
FormulaPtr hintikka(const NType& tau);

// Reachability slice for one type: a disjunction over the machine states
// carrying loc2 of the counter reachability formula conjoined with the
// target zone constraints; false when the type's machine never reaches
// loc2. Free variables as in the bundle.
FormulaPtr chi(const TimedAutomaton& ta, const std::string& loc,
               const std::string& loc2, const NType& tau);

// The full relation: disjunction of alpha and chi over every type whose
// machine reaches loc2. Throws std::logic_error if the assembled formula
// overruns the recorded envelope.
ReachFormulaBundle reach_relation_formula(const TimedAutomaton& ta,
                                          const std::string& loc,
                                          const std::string& loc2,
                                          const ReachOptions& opt = {});

// Quantifier-free formula over z{n}, r1..rn, z{n}', r1'..rn' relating the
// reference clock across region classes: the integer parts of the other
// clocks are abstracted into the source and target region vectors.
FormulaPtr cutdown_reach_formula(const TimedAutomaton& ta,
                                 const std::string& loc,
                                 const RegionVector& reg,
                                 const std::string& loc2,
                                 const RegionVector& reg2);

// Configuration reachability decided through the concrete machine.
bool reach_query(const TimedAutomaton& ta, const Config& from,
                 const Config& to);

// Evaluates the bundle at a configuration pair: real-sorted conjuncts by
// formula evaluation, counter reachability by the machine.
bool reach_formula_eval(const ReachFormulaBundle& b, const Config& from,
                        const Config& to);

// S-expression of the assembled formula preceded by ';' header lines
// naming the location pair and the component type witnesses.
std::string bundle_str(const ReachFormulaBundle& b);

}  // namespace tarel
