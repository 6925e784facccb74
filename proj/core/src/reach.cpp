#include "tarel/reach.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "tarel/dbm.hpp"
#include "tarel/mcm.hpp"

namespace tarel {

namespace {

TermPtr rvar(int i, bool primed) {
  return t_var("r" + std::to_string(i) + (primed ? "'" : ""));
}

// c + r_i - r_j with r_0 = 0, over the unprimed variables.
TermPtr diff_term_expr(const DiffTerm& t) {
  TermPtr e;
  if (t.c != 0 || (t.i == 0 && t.j == 0))
    e = t_const(static_cast<std::int64_t>(t.c));
  if (t.i > 0) e = e ? t_add(e, rvar(t.i, false)) : rvar(t.i, false);
  if (t.j > 0)
    e = e ? t_sub(e, rvar(t.j, false)) : t_sub(t_const(0), rvar(t.j, false));
  return e;
}

// r'_i - r'_j with r'_0 = 0; i == j == 0 never reaches here.
TermPtr primed_diff(int i, int j) {
  TermPtr e;
  if (i > 0) e = rvar(i, true);
  if (j > 0) e = e ? t_sub(e, rvar(j, true)) : t_sub(t_const(0), rvar(j, true));
  return e;
}

// Zone membership for the primed fractional parts. Each finite entry holds
// a class value of tau; rendering picks the first difference term with that
// value at the witness, which every inhabitant of the type agrees with.
FormulaPtr membership_formula(const DBM& m, const NType& tau) {
  std::vector<DiffTerm> terms = all_diff_terms(m.n);
  std::vector<FormulaPtr> atoms;
  for (int i = 0; i <= m.n; ++i)
    for (int j = 0; j <= m.n; ++j) {
      if (i == j || (i == 0 && j == 0)) continue;
      const Bound& b = m.at(i, j);
      if (b.inf) continue;
      const DiffTerm* rep = nullptr;
      for (const DiffTerm& t : terms)
        if (term_value(t, tau.witness) == b.v) {
          rep = &t;
          break;
        }
      if (!rep)
        throw std::logic_error("zone entry off the difference-term grid");
      TermPtr lhs = primed_diff(i, j);
      TermPtr rhs = diff_term_expr(*rep);
      atoms.push_back(b.s == Strictness::strict ? f_lt(lhs, rhs)
                                                : f_le(lhs, rhs));
    }
  return f_and(std::move(atoms));
}

int loc_index(const std::vector<std::string>& locs, const std::string& l) {
  for (std::size_t i = 0; i < locs.size(); ++i)
    if (locs[i] == l) return static_cast<int>(i);
  throw std::invalid_argument("unknown location: " + l);
}

TermPtr zvar(int i, bool primed) {
  return t_var("z" + std::to_string(i) + (primed ? "'" : ""));
}

// v = r for a finite region, v > N for the class above the constants.
FormulaPtr int_region_atom(const TermPtr& v, long long r, long long n) {
  if (r == kRegInf) return f_not(f_le(v, t_const(n)));
  return f_eq(v, t_const(r));
}

// Lexicographic, finite values first, the class above the constants last.
std::vector<RegionVector> all_region_vectors(int counters, long long n) {
  std::vector<RegionVector> out;
  RegionVector cur(counters, 0);
  std::vector<long long> idx(counters, 0);
  for (;;) {
    for (int i = 0; i < counters; ++i) cur[i] = idx[i] > n ? kRegInf : idx[i];
    out.push_back(cur);
    int i = counters - 1;
    while (i >= 0 && idx[i] == n + 1) idx[i--] = 0;
    if (i < 0) return out;
    ++idx[i];
  }
}

// (state, region) pairs the machine can reach from (s, r). The full lambda
// mask keeps every reset branch open, so the projection is complete.
std::set<std::pair<int, RegionVector>> abstract_reach(
    const MonotonicCounterMachine& m, int s, const RegionVector& r) {
  std::uint32_t full = (1u << m.counter_count) - 1;
  RegionNFA nfa = build_region_nfa(m, s, r, full, s, r);
  std::set<std::pair<int, RegionVector>> out;
  for (const RegionNfaState& st : nfa.states) out.insert({st.state, st.reg});
  return out;
}

// Disjunction over region class pairs of the reference-clock reachability
// constraints, pinning the non-reference integer parts to their classes.
// Exactly the projection of the counter reachability onto regions and the
// reference pair, hence implied by the flow encoding for the same target.
FormulaPtr reference_projection_formula(
    const RegionMachine& rm, int target,
    const std::vector<RegionVector>& regions,
    const std::map<RegionVector, std::set<std::pair<int, RegionVector>>>&
        reach_map) {
  const MonotonicCounterMachine& m = rm.machine;
  std::vector<FormulaPtr> parts;
  for (const RegionVector& r : regions) {
    const auto& reachable = reach_map.at(r);
    for (const RegionVector& r2 : regions) {
      if (!reachable.count({target, r2})) continue;
      FormulaPtr ref = reference_reach_formula(m, rm.initial, r, target, r2);
      if (ref->kind == Formula::Kind::falsum) continue;
      std::vector<FormulaPtr> atoms;
      for (int i = 1; i < m.counter_count; ++i) {
        atoms.push_back(
            int_region_atom(zvar(i, false), r[i - 1], m.max_constant));
        atoms.push_back(
            int_region_atom(zvar(i, true), r2[i - 1], m.max_constant));
      }
      atoms.push_back(ref);
      parts.push_back(f_and(std::move(atoms)));
    }
  }
  return f_or(std::move(parts));
}

ReachComponent build_component(const TimedAutomaton& ta, const std::string& loc,
                               const std::string& loc2, const NType& tau,
                               bool materialize, bool projection = false) {
  ReachComponent c;
  c.tau = tau;
  c.machine = build_parametric_machine(ta, loc, tau);
  int li = loc_index(c.machine.locations, loc2);
  for (int s = 0; s < c.machine.machine.state_count; ++s)
    if (c.machine.state_location[s] == li) {
      c.targets.push_back(s);
      c.memberships.push_back(membership_formula(c.machine.state_dbm[s], tau));
    }
  c.alpha = hintikka(tau);
  if (materialize) {
    std::vector<RegionVector> regions;
    std::map<RegionVector, std::set<std::pair<int, RegionVector>>> reach_map;
    if (projection && !c.targets.empty()) {
      regions = all_region_vectors(c.machine.machine.counter_count,
                                   c.machine.machine.max_constant);
      for (const RegionVector& r : regions)
        reach_map[r] = abstract_reach(c.machine.machine, c.machine.initial, r);
    }
    std::vector<FormulaPtr> parts;
    for (std::size_t k = 0; k < c.targets.size(); ++k) {
      std::vector<FormulaPtr> conj{reach_formula_mcm(
          c.machine.machine, c.machine.initial, c.targets[k])};
      if (projection)
        conj.push_back(reference_projection_formula(c.machine, c.targets[k],
                                                    regions, reach_map));
      conj.push_back(c.memberships[k]);
      parts.push_back(f_and(std::move(conj)));
    }
    c.chi = f_or(std::move(parts));
  }
  return c;
}

// Alias for NType::witness that reads as the sort key it is.
std::string type_key(const NType& tau) { return type_str(tau); }

long long reach_envelope(int n, std::size_t locs, long long max_constant,
                         std::size_t edges) {
  long double v = std::pow(2.0L, 6.0L * n * n + 12.0L);
  v *= static_cast<long double>(locs + 1) * static_cast<long double>(locs + 1);
  v *= std::pow(static_cast<long double>(max_constant + 2), 2.0L * n);
  v *= static_cast<long double>(edges + 1);
  const long double cap = 4.0e18L;
  return static_cast<long long>(v > cap ? cap : v);
}

}  // namespace

FormulaPtr hintikka(const NType& tau) {
  std::vector<DiffTerm> terms = all_diff_terms(tau.n);
  std::vector<Rat> vals;
  vals.reserve(terms.size());
  for (const DiffTerm& t : terms) vals.push_back(term_value(t, tau.witness));
  std::vector<FormulaPtr> atoms;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (i == j) continue;
      FormulaPtr le = f_le(diff_term_expr(terms[i]), diff_term_expr(terms[j]));
      atoms.push_back(vals[i] <= vals[j] ? le : f_not(le));
    }
  return f_and(std::move(atoms));
}

FormulaPtr chi(const TimedAutomaton& ta, const std::string& loc,
               const std::string& loc2, const NType& tau) {
  return build_component(ta, loc, loc2, tau, true).chi;
}

ReachFormulaBundle reach_relation_formula(const TimedAutomaton& ta,
                                          const std::string& loc,
                                          const std::string& loc2,
                                          const ReachOptions& opt) {
  loc_index(ta.locations, loc);
  loc_index(ta.locations, loc2);
  ReachFormulaBundle b;
  b.from_loc = loc;
  b.to_loc = loc2;
  b.clock_count = ta.clock_count;

  std::vector<NType> types = enumerate_types(ta.clock_count);
  std::vector<ReachComponent> slots(types.size());
  std::vector<char> keep(types.size(), 0);

  auto work = [&](std::size_t i) {
    ReachComponent c = build_component(ta, loc, loc2, types[i],
                                       opt.materialize,
                                       opt.reference_projection);
    if (!c.targets.empty()) {
      slots[i] = std::move(c);
      keep[i] = 1;
    }
  };
  if (opt.jobs <= 1) {
    for (std::size_t i = 0; i < types.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto runner = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= types.size()) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(opt.jobs, static_cast<int>(types.size()));
    for (int t = 0; t < count; ++t) pool.emplace_back(runner);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  for (std::size_t i = 0; i < types.size(); ++i)
    if (keep[i]) b.components.push_back(std::move(slots[i]));
  std::sort(b.components.begin(), b.components.end(),
            [](const ReachComponent& x, const ReachComponent& y) {
              return type_key(x.tau) < type_key(y.tau);
            });

  b.envelope = reach_envelope(ta.clock_count, ta.locations.size(),
                              ta.max_constant, ta.edges.size());
  if (opt.materialize) {
    std::vector<FormulaPtr> parts;
    for (const ReachComponent& c : b.components)
      parts.push_back(f_and({c.alpha, c.chi}));
    b.formula = f_or(std::move(parts));
    b.node_count = formula_node_count(b.formula);
    if (b.node_count > b.envelope)
      throw std::logic_error("reachability formula exceeded its envelope");
  }
  return b;
}

FormulaPtr cutdown_reach_formula(const TimedAutomaton& ta,
                                 const std::string& loc,
                                 const RegionVector& reg,
                                 const std::string& loc2,
                                 const RegionVector& reg2) {
  loc_index(ta.locations, loc);
  loc_index(ta.locations, loc2);
  const int n = ta.clock_count;
  if (static_cast<int>(reg.size()) != n || static_cast<int>(reg2.size()) != n)
    throw std::invalid_argument("region vector arity mismatch");

  std::vector<FormulaPtr> parts;
  for (const NType& tau : enumerate_types(n)) {
    ReachComponent c = build_component(ta, loc, loc2, tau, false);
    if (c.targets.empty()) continue;
    FormulaPtr alpha = c.alpha;
    for (std::size_t k = 0; k < c.targets.size(); ++k) {
      FormulaPtr ref = reference_reach_formula(
          c.machine.machine, c.machine.initial, reg, c.targets[k], reg2);
      if (ref->kind == Formula::Kind::falsum) continue;
      parts.push_back(f_and({alpha, ref, c.memberships[k]}));
    }
  }
  return f_or(std::move(parts));
}

bool reach_query(const TimedAutomaton& ta, const Config& from,
                 const Config& to) {
  RegionMachine rm = build_concrete_machine(ta, from.location, from.val);
  int li = loc_index(rm.locations, to.location);
  std::vector<Rat> target_frac = frac_of(to.val);
  std::vector<long long> source_int = floor_of(from.val);
  std::vector<long long> target_int = floor_of(to.val);
  for (int s = 0; s < rm.machine.state_count; ++s) {
    if (rm.state_location[s] != li) continue;
    if (!dbm_member(rm.state_dbm[s], target_frac)) continue;
    if (mcm_point_reach(rm.machine, rm.initial, source_int, s, target_int))
      return true;
  }
  return false;
}

bool reach_formula_eval(const ReachFormulaBundle& b, const Config& from,
                        const Config& to) {
  if (from.location != b.from_loc || to.location != b.to_loc)
    throw std::invalid_argument("configuration locations differ from bundle");
  if (static_cast<int>(from.val.size()) != b.clock_count ||
      static_cast<int>(to.val.size()) != b.clock_count)
    throw std::invalid_argument("configuration arity mismatch");

  Assignment a;
  std::vector<Rat> fr = frac_of(from.val);
  std::vector<Rat> fr2 = frac_of(to.val);
  for (int i = 0; i < b.clock_count; ++i) {
    a.set("r" + std::to_string(i + 1), fr[i]);
    a.set("r" + std::to_string(i + 1) + "'", fr2[i]);
  }
  std::vector<long long> zi = floor_of(from.val);
  std::vector<long long> zi2 = floor_of(to.val);

  for (const ReachComponent& c : b.components) {
    if (!eval(c.alpha, a)) continue;
    for (std::size_t k = 0; k < c.targets.size(); ++k) {
      if (!eval(c.memberships[k], a)) continue;
      if (mcm_point_reach(c.machine.machine, c.machine.initial, zi,
                          c.targets[k], zi2))
        return true;
    }
  }
  return false;
}

std::string bundle_str(const ReachFormulaBundle& b) {
  if (!b.formula)
    throw std::logic_error("bundle was built without materialization");
  std::ostringstream os;
  os << "; reachability relation for " << b.from_loc << " -> " << b.to_loc
     << "\n";
  os << "; clocks: " << b.clock_count << "  components: "
     << b.components.size() << "  nodes: " << b.node_count << "\n";
  for (std::size_t i = 0; i < b.components.size(); ++i) {
    os << "; type witness " << (i + 1) << "/" << b.components.size() << ": (";
    const std::vector<Rat>& w = b.components[i].tau.witness;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) os << ", ";
      os << w[j].str();
    }
    os << ")\n";
  }
  os << serialize(b.formula) << "\n";
  return os.str();
}

}  // namespace tarel
