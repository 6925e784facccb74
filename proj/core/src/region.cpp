#include "tarel/region.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace tarel {

namespace {

int location_index(const TimedAutomaton& ta, const std::string& name) {
  for (std::size_t i = 0; i < ta.locations.size(); ++i)
    if (ta.locations[i] == name) return (int)i;
  throw std::invalid_argument("unknown location: " + name);
}

void check_normalized(const TimedAutomaton& ta) {
  if (!ta.has_reference)
    throw std::invalid_argument("automaton has no reference clock; normalize first");
  for (const Edge& e : ta.edges) {
    for (const GuardAtom& a : e.guard)
      if (a.rel == GuardRel::gt)
        throw std::invalid_argument("x>k guard present; normalize first");
    if (e.resets.size() > 1)
      throw std::invalid_argument("multi-reset edge present; normalize first");
  }
}

// One automaton edge, pre-split. A false return from the guard
// translation means the integer part is unsatisfiable and the edge
// produces no machine transitions at all.
struct DiscreteProto {
  int src = 0, dst = 0;
  CounterGuard guard;
  std::vector<FracAtom> frac;
  CounterOp op;
  int reset_clock = 0;  // 0 when the edge resets nothing
  std::size_t ta_edge = 0;
};

bool translate_int_guard(const std::vector<IntAtom>& atoms, CounterGuard& out) {
  for (const IntAtom& a : atoms) {
    switch (a.rel) {
      case IntRel::le:
        if (a.k < 0) return false;
        out.push_back({a.counter, CounterRel::lt, a.k + 1});
        break;
      case IntRel::eq:
        out.push_back({a.counter, CounterRel::eq, a.k});
        break;
      case IntRel::ge:
        if (a.k > 0) out.push_back({a.counter, CounterRel::gt, a.k - 1});
        break;
    }
  }
  return true;
}

std::vector<long long> state_key(int loc, const DBM& m) {
  std::vector<long long> key;
  key.reserve(1 + 3 * m.e.size());
  key.push_back(loc);
  for (const Bound& b : m.e) {
    if (b.inf) {
      key.push_back(2);
      key.push_back(0);
      key.push_back(1);
    } else {
      key.push_back(b.s == Strictness::strict ? 1 : 0);
      key.push_back(b.v.num());
      key.push_back(b.v.den());
    }
  }
  return key;
}

RegionMachine build_from_seed(const TimedAutomaton& ta, int loc_idx,
                              const DBM& seed, std::optional<NType> tau,
                              const RegionBuildOptions& opt) {
  const int n = ta.clock_count;
  RegionMachine rm;
  rm.locations = ta.locations;
  rm.tau = std::move(tau);
  rm.machine.counter_count = n;
  rm.machine.max_constant = ta.max_constant;

  std::vector<DiscreteProto> protos;
  for (std::size_t ei = 0; ei < ta.edges.size(); ++ei) {
    const Edge& e = ta.edges[ei];
    GuardSplit split = decompose_guard(e.guard);
    DiscreteProto p;
    if (!translate_int_guard(split.int_part, p.guard)) continue;
    p.src = location_index(ta, e.source);
    p.dst = location_index(ta, e.target);
    p.frac = split.frac_part;
    if (e.resets.empty()) {
      p.op = op_nop();
    } else {
      p.reset_clock = e.resets[0];
      p.op = op_reset(p.reset_clock);
    }
    p.ta_edge = ei;
    protos.push_back(std::move(p));
  }

  std::map<std::vector<long long>, int> index;
  auto intern = [&](int loc, const DBM& m) {
    auto key = state_key(loc, m);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = (int)rm.state_dbm.size();
    index.emplace(std::move(key), id);
    rm.state_location.push_back(loc);
    rm.state_dbm.push_back(m);
    return id;
  };

  if (opt.full_product) {
    ClosureSet cs = rm.tau ? compute_closure(ParametricDBM{*rm.tau, seed})
                           : compute_closure(seed, ClosureMode::concrete);
    for (int loc = 0; loc < (int)ta.locations.size(); ++loc)
      for (const DBM& m : cs.members) intern(loc, m);
  }
  rm.initial = intern(loc_idx, seed);

  for (int s = 0; s < (int)rm.state_dbm.size(); ++s) {
    const DBM cur = rm.state_dbm[s];  // the vector grows during the loop
    const int cloc = rm.state_location[s];

    DBM d = relativized_elapse(cur);
    if (d != cur) {
      int t = intern(cloc, d);
      rm.machine.edges.push_back({s, {}, op_nop(), t});
      rm.edge_tags.push_back({RmEdgeKind::delay, 0, 0});
    }

    for (int i = 1; i <= n; ++i) {
      DBM w = wrap_clock(cur, i);
      if (!is_consistent(w)) continue;
      int t = intern(cloc, w);
      rm.machine.edges.push_back({s, {}, op_inc(i), t});
      rm.edge_tags.push_back({RmEdgeKind::wrapping, i, 0});
    }

    for (const DiscreteProto& p : protos) {
      if (p.src != cloc) continue;
      DBM z = cur;
      bool dead = false;
      for (const FracAtom& a : p.frac) {
        switch (a.rel) {
          case FracRel::lt1:
            z = intersect_atomic(z, a.clock, 0, bound_lt(Rat(1)));
            break;
          case FracRel::eq0:
            z = intersect_atomic(z, a.clock, 0, bound_le(Rat(0)));
            break;
          case FracRel::open01:
            z = intersect_atomic(z, 0, a.clock, bound_lt(Rat(0)));
            z = intersect_atomic(z, a.clock, 0, bound_lt(Rat(1)));
            break;
          case FracRel::ge0:
            break;
        }
        if (!is_consistent(z)) {
          dead = true;
          break;
        }
      }
      if (dead) continue;
      if (p.reset_clock != 0) z = reset(z, p.reset_clock);
      int t = intern(p.dst, z);
      rm.machine.edges.push_back({s, p.guard, p.op, t});
      rm.edge_tags.push_back({RmEdgeKind::discrete, p.reset_clock, p.ta_edge});
    }
  }

  rm.machine.state_count = (int)rm.state_dbm.size();
  check_machine(rm.machine);
  return rm;
}

}  // namespace

RegionMachine build_concrete_machine(const TimedAutomaton& ta,
                                     const std::string& loc,
                                     const std::vector<Rat>& nu,
                                     const RegionBuildOptions& opt) {
  check_normalized(ta);
  int loc_idx = location_index(ta, loc);
  if ((int)nu.size() != ta.clock_count)
    throw std::invalid_argument("valuation arity mismatch");
  for (const Rat& v : nu)
    if (v < Rat(0)) throw std::invalid_argument("negative clock value");
  return build_from_seed(ta, loc_idx, dbm_of_valuation(frac_of(nu)),
                         std::nullopt, opt);
}

RegionMachine build_parametric_machine(const TimedAutomaton& ta,
                                       const std::string& loc,
                                       const NType& tau,
                                       const RegionBuildOptions& opt) {
  check_normalized(ta);
  int loc_idx = location_index(ta, loc);
  if (tau.n != ta.clock_count)
    throw std::invalid_argument("type arity mismatch");
  return build_from_seed(ta, loc_idx, build_M_tau(tau).m, tau, opt);
}

std::vector<long long> floor_of(const std::vector<Rat>& nu) {
  std::vector<long long> out;
  out.reserve(nu.size());
  for (const Rat& v : nu) out.push_back(v.floor());
  return out;
}

std::vector<Rat> frac_of(const std::vector<Rat>& nu) {
  std::vector<Rat> out;
  out.reserve(nu.size());
  for (const Rat& v : nu) out.push_back(v - Rat(v.floor()));
  return out;
}

int find_state(const RegionMachine& rm, const std::string& loc, const DBM& m) {
  for (std::size_t s = 0; s < rm.state_dbm.size(); ++s)
    if (rm.locations[rm.state_location[s]] == loc && rm.state_dbm[s] == m)
      return (int)s;
  return -1;
}

std::string region_machine_str(const RegionMachine& rm) {
  std::string out;
  for (std::size_t s = 0; s < rm.state_dbm.size(); ++s) {
    out += "state " + std::to_string(s) + ": " +
           rm.locations[rm.state_location[s]] + "\n";
    std::string block = rm.tau
                            ? pdbm_str(ParametricDBM{*rm.tau, rm.state_dbm[s]})
                            : dbm_str(rm.state_dbm[s]);
    std::size_t pos = 0;
    while (pos < block.size()) {
      std::size_t nl = block.find('\n', pos);
      if (nl == std::string::npos) nl = block.size();
      out += "  " + block.substr(pos, nl - pos) + "\n";
      pos = nl + 1;
    }
  }
  out += mcm_str(rm.machine);
  return out;
}

}  // namespace tarel
