#include "tarel/mcm.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

namespace tarel {

namespace {

// Direct comparison is exact for values <= max_constant and agrees with the
// "anything above N" class for larger values, because guard constants never
// exceed N. The saturation sentinel B+1 therefore needs no special case.
bool atom_holds(long long v, const CounterAtom& a) {
  switch (a.rel) {
    case CounterRel::lt: return v < a.k;
    case CounterRel::eq: return v == a.k;
    case CounterRel::gt: return v > a.k;
  }
  throw std::logic_error("unreachable counter relation");
}

bool guard_holds(const std::vector<long long>& vals, const CounterGuard& g) {
  for (const auto& a : g)
    if (!atom_holds(vals[a.counter - 1], a)) return false;
  return true;
}

bool reg_atom_holds(long long r, const CounterAtom& a) {
  if (r == kRegInf) return a.rel == CounterRel::gt;
  return atom_holds(r, a);
}

bool reg_guard_holds(const RegionVector& r, const CounterGuard& g) {
  for (const auto& a : g)
    if (!reg_atom_holds(r[a.counter - 1], a)) return false;
  return true;
}

long long reg_inc(long long r, long long n) {
  if (r == kRegInf || r >= n) return kRegInf;
  return r + 1;
}

void check_values(const MonotonicCounterMachine& m,
                  const std::vector<long long>& vals, const char* what) {
  if ((int)vals.size() != m.counter_count)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(m.counter_count) + " counters");
  for (long long v : vals)
    if (v < 0)
      throw std::invalid_argument(std::string(what) + ": negative counter");
}

void check_state(const MonotonicCounterMachine& m, int s, const char* what) {
  if (s < 0 || s >= m.state_count)
    throw std::invalid_argument(std::string(what) + ": state " +
                                std::to_string(s) + " out of range");
}

void check_region(const MonotonicCounterMachine& m, const RegionVector& r,
                  const char* what) {
  if ((int)r.size() != m.counter_count)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(m.counter_count) + " counters");
  for (long long v : r)
    if (v != kRegInf && (v < 0 || v > m.max_constant))
      throw std::invalid_argument(std::string(what) +
                                  ": region entry out of range");
}

std::string op_str(const CounterOp& op) {
  switch (op.kind) {
    case CounterOp::Kind::nop: return "nop";
    case CounterOp::Kind::inc: return "inc(c" + std::to_string(op.counter) + ")";
    case CounterOp::Kind::reset:
      return "reset(c" + std::to_string(op.counter) + ")";
  }
  throw std::logic_error("unreachable op kind");
}

}  // namespace

void check_machine(const MonotonicCounterMachine& m) {
  if (m.state_count < 1) throw std::invalid_argument("machine needs a state");
  if (m.counter_count < 1 || m.counter_count > 30)
    throw std::invalid_argument("counter count out of range");
  if (m.max_constant < 0) throw std::invalid_argument("negative max constant");
  for (const auto& e : m.edges) {
    if (e.source < 0 || e.source >= m.state_count || e.target < 0 ||
        e.target >= m.state_count)
      throw std::invalid_argument("edge state out of range");
    for (const auto& a : e.guard) {
      if (a.counter < 1 || a.counter > m.counter_count)
        throw std::invalid_argument("guard counter out of range");
      if (a.k < 0 || a.k > m.max_constant)
        throw std::invalid_argument("guard constant exceeds max_constant");
    }
    if (e.op.kind != CounterOp::Kind::nop &&
        (e.op.counter < 1 || e.op.counter > m.counter_count))
      throw std::invalid_argument("op counter out of range");
  }
}

std::string counter_guard_str(const CounterGuard& g) {
  if (g.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += " & ";
    out += "c" + std::to_string(g[i].counter);
    switch (g[i].rel) {
      case CounterRel::lt: out += "<"; break;
      case CounterRel::eq: out += "="; break;
      case CounterRel::gt: out += ">"; break;
    }
    out += std::to_string(g[i].k);
  }
  return out;
}

std::string mcm_str(const MonotonicCounterMachine& m) {
  std::string out = "states: " + std::to_string(m.state_count) + "\n" +
                    "counters: " + std::to_string(m.counter_count) + "\n" +
                    "max_constant: " + std::to_string(m.max_constant) + "\n";
  for (const auto& e : m.edges)
    out += "edge " + std::to_string(e.source) + " -> " +
           std::to_string(e.target) + " guard \"" + counter_guard_str(e.guard) +
           "\" op " + op_str(e.op) + "\n";
  return out;
}

bool mcm_point_reach(const MonotonicCounterMachine& m, int from_state,
                     const std::vector<long long>& from, int to_state,
                     const std::vector<long long>& to) {
  check_machine(m);
  check_state(m, from_state, "point reach");
  check_state(m, to_state, "point reach");
  check_values(m, from, "point reach source");
  check_values(m, to, "point reach target");

  long long b = m.max_constant;
  for (long long v : to) b = std::max(b, v);
  const long long top = b + 1;
  const int n = m.counter_count;

  long long radix = b + 2, space = m.state_count;
  for (int i = 0; i < n; ++i) {
    space *= radix;
    if (space > 100000000) throw std::runtime_error("point query too large");
  }

  std::vector<std::vector<const McmEdge*>> out(m.state_count);
  for (const auto& e : m.edges) out[e.source].push_back(&e);

  auto encode = [&](int s, const std::vector<long long>& v) {
    long long code = s;
    for (int i = 0; i < n; ++i) code = code * radix + v[i];
    return code;
  };

  std::vector<long long> start = from;
  for (auto& v : start)
    if (v > b) v = top;

  std::vector<bool> seen(space, false);
  std::deque<std::pair<int, std::vector<long long>>> queue;
  seen[encode(from_state, start)] = true;
  queue.emplace_back(from_state, start);

  while (!queue.empty()) {
    auto [s, vals] = queue.front();
    queue.pop_front();
    if (s == to_state && vals == to) return true;
    for (const McmEdge* e : out[s]) {
      if (!guard_holds(vals, e->guard)) continue;
      std::vector<long long> next = vals;
      if (e->op.kind == CounterOp::Kind::inc) {
        long long& v = next[e->op.counter - 1];
        v = v >= b ? top : v + 1;
      } else if (e->op.kind == CounterOp::Kind::reset) {
        next[e->op.counter - 1] = 0;
      }
      long long code = encode(e->target, next);
      if (seen[code]) continue;
      seen[code] = true;
      queue.emplace_back(e->target, std::move(next));
    }
  }
  return false;
}

RegionVector reg_of(const std::vector<long long>& vals, long long max_constant) {
  RegionVector r(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0) throw std::invalid_argument("negative counter value");
    r[i] = vals[i] > max_constant ? kRegInf : vals[i];
  }
  return r;
}

std::string reg_str(const RegionVector& r) {
  std::string out = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ", ";
    out += r[i] == kRegInf ? "inf" : std::to_string(r[i]);
  }
  return out + ")";
}

namespace {

struct NfaBuilder {
  RegionNFA nfa;
  std::map<std::tuple<int, RegionVector, std::uint32_t>, int> index;

  int intern(int s, const RegionVector& r, std::uint32_t lam,
             std::deque<int>* work) {
    auto key = std::make_tuple(s, r, lam);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = (int)nfa.states.size();
    index.emplace(std::move(key), id);
    nfa.states.push_back({s, r, lam});
    if (work) work->push_back(id);
    return id;
  }

  void link(int from, int letter, int to) {
    nfa.transitions.push_back({from, letter, to});
  }
};

}  // namespace

RegionNFA build_region_nfa(const MonotonicCounterMachine& m, int s,
                           const RegionVector& r, std::uint32_t lam, int s2,
                           const RegionVector& r2) {
  check_machine(m);
  check_state(m, s, "region nfa");
  check_state(m, s2, "region nfa");
  check_region(m, r, "region nfa source");
  check_region(m, r2, "region nfa target");
  if (lam >> m.counter_count)
    throw std::invalid_argument("region nfa: lambda names unknown counters");

  const long long n = m.max_constant;
  std::vector<std::vector<const McmEdge*>> out(m.state_count);
  for (const auto& e : m.edges) out[e.source].push_back(&e);

  NfaBuilder b;
  b.nfa.counter_count = m.counter_count;
  std::deque<int> work;
  b.intern(s, r, lam, &work);
  b.nfa.initials.push_back(0);

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    RegionNfaState cur = b.nfa.states[id];
    for (const McmEdge* e : out[cur.state]) {
      if (!reg_guard_holds(cur.reg, e->guard)) continue;
      switch (e->op.kind) {
        case CounterOp::Kind::nop:
          b.link(id, 0, b.intern(e->target, cur.reg, cur.lam, &work));
          break;
        case CounterOp::Kind::inc: {
          int c = e->op.counter;
          RegionVector next = cur.reg;
          next[c - 1] = reg_inc(next[c - 1], n);
          bool silent = (cur.lam >> (c - 1)) & 1;
          b.link(id, silent ? 0 : c, b.intern(e->target, next, cur.lam, &work));
          break;
        }
        case CounterOp::Kind::reset: {
          int c = e->op.counter;
          if (!((cur.lam >> (c - 1)) & 1)) break;
          RegionVector next = cur.reg;
          next[c - 1] = 0;
          b.link(id, 0, b.intern(e->target, next, cur.lam, &work));
          b.link(id, 0,
                 b.intern(e->target, next, cur.lam & ~(1u << (c - 1)), &work));
          break;
        }
      }
    }
  }

  for (int i = 0; i < (int)b.nfa.states.size(); ++i) {
    const auto& st = b.nfa.states[i];
    if (st.state == s2 && st.reg == r2 && st.lam == 0)
      b.nfa.finals.push_back(i);
  }
  return b.nfa;
}

RegionNFA build_region_nfa_unary(const MonotonicCounterMachine& m, int s,
                                 const RegionVector& r, bool reset_branch,
                                 int s2, const RegionVector& r2) {
  check_machine(m);
  check_state(m, s, "unary nfa");
  check_state(m, s2, "unary nfa");
  check_region(m, r, "unary nfa source");
  check_region(m, r2, "unary nfa target");

  const long long n = m.max_constant;
  const int ref = m.counter_count;
  const std::uint32_t ref_bit = 1u << (ref - 1);
  std::vector<std::vector<const McmEdge*>> out(m.state_count);
  for (const auto& e : m.edges) out[e.source].push_back(&e);

  NfaBuilder b;
  b.nfa.counter_count = m.counter_count;
  std::deque<int> work;
  b.intern(s, r, reset_branch ? ref_bit : 0, &work);
  b.nfa.initials.push_back(0);

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    RegionNfaState cur = b.nfa.states[id];
    for (const McmEdge* e : out[cur.state]) {
      if (!reg_guard_holds(cur.reg, e->guard)) continue;
      switch (e->op.kind) {
        case CounterOp::Kind::nop:
          b.link(id, 0, b.intern(e->target, cur.reg, cur.lam, &work));
          break;
        case CounterOp::Kind::inc: {
          int c = e->op.counter;
          RegionVector next = cur.reg;
          next[c - 1] = reg_inc(next[c - 1], n);
          bool silent = c != ref || cur.lam == ref_bit;
          b.link(id, silent ? 0 : ref,
                 b.intern(e->target, next, cur.lam, &work));
          break;
        }
        case CounterOp::Kind::reset: {
          int c = e->op.counter;
          RegionVector next = cur.reg;
          next[c - 1] = 0;
          if (c != ref) {
            // Non-reference counters are tracked by region only; their
            // resets neither consult nor change lam.
            b.link(id, 0, b.intern(e->target, next, cur.lam, &work));
          } else if (cur.lam == ref_bit) {
            b.link(id, 0, b.intern(e->target, next, ref_bit, &work));
            b.link(id, 0, b.intern(e->target, next, 0, &work));
          }
          break;
        }
      }
    }
  }

  for (int i = 0; i < (int)b.nfa.states.size(); ++i) {
    const auto& st = b.nfa.states[i];
    if (st.state == s2 && st.reg == r2 && st.lam == 0)
      b.nfa.finals.push_back(i);
  }
  return b.nfa;
}

bool nfa_parikh_member(const RegionNFA& nfa,
                       const std::vector<long long>& counts) {
  if ((int)counts.size() != nfa.counter_count)
    throw std::invalid_argument("parikh member: wrong arity");
  for (long long c : counts)
    if (c < 0) throw std::invalid_argument("parikh member: negative count");
  if (nfa.states.empty()) return false;

  long long space = (long long)nfa.states.size();
  for (long long c : counts) {
    space *= c + 1;
    if (space > 100000000)
      throw std::runtime_error("parikh member query too large");
  }

  std::vector<std::vector<const NfaTransition*>> out(nfa.states.size());
  for (const auto& t : nfa.transitions) {
    if (t.letter < 0 || t.letter > nfa.counter_count)
      throw std::invalid_argument("parikh member: letter out of range");
    out[t.source].push_back(&t);
  }

  auto encode = [&](int q, const std::vector<long long>& c) {
    long long code = q;
    for (int i = 0; i < nfa.counter_count; ++i)
      code = code * (counts[i] + 1) + c[i];
    return code;
  };

  std::vector<bool> seen(space, false);
  std::deque<std::pair<int, std::vector<long long>>> queue;
  std::vector<long long> zero(nfa.counter_count, 0);
  std::vector<bool> is_final(nfa.states.size(), false);
  for (int f : nfa.finals) is_final[f] = true;
  for (int q : nfa.initials) {
    if (!seen[encode(q, zero)]) {
      seen[encode(q, zero)] = true;
      queue.emplace_back(q, zero);
    }
  }
  while (!queue.empty()) {
    auto [q, consumed] = queue.front();
    queue.pop_front();
    if (is_final[q] && consumed == counts) return true;
    for (const NfaTransition* t : out[q]) {
      std::vector<long long> next = consumed;
      if (t->letter) {
        long long& v = next[t->letter - 1];
        if (v == counts[t->letter - 1]) continue;
        ++v;
      }
      long long code = encode(t->target, next);
      if (seen[code]) continue;
      seen[code] = true;
      queue.emplace_back(t->target, std::move(next));
    }
  }
  return false;
}

bool SemilinearSet::contains(long long x) const {
  if (x < 0) return false;
  if (x < threshold)
    return std::binary_search(base.begin(), base.end(), x);
  for (const auto& [offset, period] : progressions)
    if (x >= offset && (x - offset) % period == 0) return true;
  return false;
}

std::string SemilinearSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(base[i]);
  }
  out += "}";
  for (const auto& [offset, period] : progressions)
    out += " ∪ (" + std::to_string(offset) + " + " +
           std::to_string(period) + "·N)";
  return out;
}

SemilinearSet unary_length_semilinear(const RegionNFA& nfa) {
  for (const auto& t : nfa.transitions)
    if (t.letter != 0 && t.letter != nfa.counter_count)
      throw std::invalid_argument("unary length set: non-reference letter");

  SemilinearSet out;
  if (nfa.initials.empty() || nfa.finals.empty()) return out;

  const int s = (int)nfa.states.size();
  const int words = (s + 63) / 64;
  std::vector<std::vector<int>> eps(s), step(s);
  for (const auto& t : nfa.transitions)
    (t.letter ? step : eps)[t.source].push_back(t.target);

  using Layer = std::vector<std::uint64_t>;
  auto test = [&](const Layer& l, int i) {
    return (l[i >> 6] >> (i & 63)) & 1;
  };
  auto close = [&](Layer& l) {
    std::deque<int> work;
    for (int i = 0; i < s; ++i)
      if (test(l, i)) work.push_back(i);
    while (!work.empty()) {
      int i = work.front();
      work.pop_front();
      for (int j : eps[i])
        if (!test(l, j)) {
          l[j >> 6] |= 1ull << (j & 63);
          work.push_back(j);
        }
    }
  };

  Layer final_mask(words, 0);
  for (int f : nfa.finals) final_mask[f >> 6] |= 1ull << (f & 63);
  auto accepts = [&](const Layer& l) {
    for (int w = 0; w < words; ++w)
      if (l[w] & final_mask[w]) return true;
    return false;
  };

  Layer cur(words, 0);
  for (int q : nfa.initials) cur[q >> 6] |= 1ull << (q & 63);
  close(cur);

  const long long cap = s < 21 ? (1ll << s) + 2 : 2000000;
  std::map<Layer, long long> seen;
  std::vector<char> acc;
  long long mu = -1, pi = -1;
  for (long long step_no = 0;; ++step_no) {
    auto it = seen.find(cur);
    if (it != seen.end()) {
      mu = it->second;
      pi = step_no - mu;
      break;
    }
    seen.emplace(cur, step_no);
    acc.push_back(accepts(cur));
    if (step_no > cap)
      throw std::runtime_error("unary length set did not stabilize");
    Layer next(words, 0);
    for (int i = 0; i < s; ++i)
      if (test(cur, i))
        for (int j : step[i]) next[j >> 6] |= 1ull << (j & 63);
    close(next);
    cur = std::move(next);
  }

  out.threshold = mu;
  for (long long l = 0; l < mu; ++l)
    if (acc[l]) out.base.push_back(l);
  for (long long l = mu; l < mu + pi; ++l)
    if (acc[l]) out.progressions.emplace_back(l, pi);
  return out;
}

namespace {

TermPtr sum_or_zero(std::vector<TermPtr> terms) {
  if (terms.empty()) return t_const(0);
  if (terms.size() == 1) return terms[0];
  return t_add(std::move(terms));
}

// Flow encoding over the trimmed NFA: one multiplicity per edge, one entry
// and one exit indicator, and per-state distance certificates that force the
// used subgraph to be connected to the entry. Returns nullptr when the
// language is empty.
FormulaPtr flow_core(const RegionNFA& nfa, const std::vector<TermPtr>& lhs) {
  if ((int)lhs.size() != nfa.counter_count)
    throw std::invalid_argument("flow formula: wrong letter arity");
  for (const auto& t : nfa.transitions)
    if (t.letter < 0 || t.letter > nfa.counter_count)
      throw std::invalid_argument("flow formula: letter out of range");

  const int s = (int)nfa.states.size();
  std::vector<char> fwd(s, 0), bwd(s, 0);
  {
    std::vector<std::vector<int>> out(s), in(s);
    for (const auto& t : nfa.transitions) {
      out[t.source].push_back(t.target);
      in[t.target].push_back(t.source);
    }
    std::deque<int> work;
    for (int q : nfa.initials)
      if (!fwd[q]) fwd[q] = 1, work.push_back(q);
    while (!work.empty()) {
      int q = work.front();
      work.pop_front();
      for (int j : out[q])
        if (!fwd[j]) fwd[j] = 1, work.push_back(j);
    }
    for (int q : nfa.finals)
      if (!bwd[q]) bwd[q] = 1, work.push_back(q);
    while (!work.empty()) {
      int q = work.front();
      work.pop_front();
      for (int j : in[q])
        if (!bwd[j]) bwd[j] = 1, work.push_back(j);
    }
  }

  std::vector<int> keep(s, -1);
  int kept = 0;
  for (int q = 0; q < s; ++q)
    if (fwd[q] && bwd[q]) keep[q] = kept++;
  if (kept == 0) return nullptr;

  struct KeptEdge {
    int source, letter, target;
  };
  std::vector<KeptEdge> edges;
  for (const auto& t : nfa.transitions)
    if (keep[t.source] >= 0 && keep[t.target] >= 0)
      edges.push_back({keep[t.source], t.letter, keep[t.target]});
  std::vector<int> initials, finals;
  for (int q : nfa.initials)
    if (keep[q] >= 0) initials.push_back(keep[q]);
  for (int q : nfa.finals)
    if (keep[q] >= 0) finals.push_back(keep[q]);
  std::sort(initials.begin(), initials.end());
  initials.erase(std::unique(initials.begin(), initials.end()),
                 initials.end());
  std::sort(finals.begin(), finals.end());
  finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
  if (initials.empty() || finals.empty()) return nullptr;

  const int ne = (int)edges.size();
  auto y = [&](int e) { return t_var("w" + std::to_string(1 + e)); };
  auto dist = [&](int q) { return t_var("w" + std::to_string(1 + ne + q)); };
  auto enter = [&](int i) {
    return t_var("w" + std::to_string(1 + ne + kept + i));
  };
  auto leave = [&](int j) {
    return t_var("w" + std::to_string(1 + ne + kept + (int)initials.size() + j));
  };

  std::vector<int> entry_of(kept, -1), exit_of(kept, -1);
  for (int i = 0; i < (int)initials.size(); ++i) entry_of[initials[i]] = i;
  for (int j = 0; j < (int)finals.size(); ++j) exit_of[finals[j]] = j;

  std::vector<std::vector<int>> in_edges(kept);
  for (int e = 0; e < ne; ++e) in_edges[edges[e].target].push_back(e);

  std::vector<FormulaPtr> parts;
  const int total_vars = ne + kept + (int)initials.size() + (int)finals.size();
  for (int v = 0; v < total_vars; ++v)
    parts.push_back(f_le(t_const(0), t_var("w" + std::to_string(1 + v))));

  for (int q = 0; q < kept; ++q) {
    std::vector<TermPtr> in, out;
    for (int e : in_edges[q]) in.push_back(y(e));
    if (entry_of[q] >= 0) in.push_back(enter(entry_of[q]));
    for (int e = 0; e < ne; ++e)
      if (edges[e].source == q) out.push_back(y(e));
    if (exit_of[q] >= 0) out.push_back(leave(exit_of[q]));
    parts.push_back(f_eq(sum_or_zero(in), sum_or_zero(out)));
  }

  {
    std::vector<TermPtr> entries, exits;
    for (int i = 0; i < (int)initials.size(); ++i) entries.push_back(enter(i));
    for (int j = 0; j < (int)finals.size(); ++j) exits.push_back(leave(j));
    parts.push_back(f_eq(sum_or_zero(std::move(entries)), t_const(1)));
    parts.push_back(f_eq(sum_or_zero(std::move(exits)), t_const(1)));
  }

  for (int q = 0; q < kept; ++q) {
    std::vector<TermPtr> inflow;
    for (int e : in_edges[q]) inflow.push_back(y(e));
    if (entry_of[q] >= 0) inflow.push_back(enter(entry_of[q]));
    std::vector<FormulaPtr> cases;
    cases.push_back(f_and({f_eq(sum_or_zero(std::move(inflow)), t_const(0)),
                           f_eq(dist(q), t_const(0))}));
    if (entry_of[q] >= 0)
      cases.push_back(f_and({f_le(t_const(1), enter(entry_of[q])),
                             f_eq(dist(q), t_const(1))}));
    for (int e : in_edges[q])
      cases.push_back(f_and({f_le(t_const(1), y(e)),
                             f_le(t_const(1), dist(edges[e].source)),
                             f_eq(dist(q), t_add(dist(edges[e].source),
                                                 t_const(1)))}));
    parts.push_back(f_or(std::move(cases)));
    parts.push_back(f_le(dist(q), t_const(kept)));
  }

  for (int c = 1; c <= nfa.counter_count; ++c) {
    std::vector<TermPtr> sum;
    for (int e = 0; e < ne; ++e)
      if (edges[e].letter == c) sum.push_back(y(e));
    parts.push_back(f_eq(lhs[c - 1], sum_or_zero(std::move(sum))));
  }

  FormulaPtr body = f_and(std::move(parts));
  for (int v = total_vars; v-- > 0;)
    body = f_exists("w" + std::to_string(1 + v), body);
  return body;
}

}  // namespace

FormulaPtr parikh_flow_formula(const RegionNFA& nfa) {
  std::vector<TermPtr> lhs;
  for (int c = 1; c <= nfa.counter_count; ++c)
    lhs.push_back(t_var("z" + std::to_string(c)));
  FormulaPtr f = flow_core(nfa, lhs);
  return f ? f : f_false();
}

FormulaPtr parikh_flow_formula_lhs(const RegionNFA& nfa,
                                   const std::vector<TermPtr>& letter_lhs) {
  FormulaPtr f = flow_core(nfa, letter_lhs);
  return f ? f : f_false();
}

namespace {

FormulaPtr region_entry_atom(const TermPtr& v, long long r, long long n) {
  if (r == kRegInf) return f_not(f_le(v, t_const(n)));
  return f_eq(v, t_const(r));
}

// Region vectors in lexicographic order, finite entries first and the class
// above max_constant last.
void each_region(int counters, long long n,
                 const std::function<void(const RegionVector&)>& fn) {
  RegionVector r(counters, 0);
  std::vector<long long> idx(counters, 0);
  for (;;) {
    for (int i = 0; i < counters; ++i) r[i] = idx[i] > n ? kRegInf : idx[i];
    fn(r);
    int i = counters - 1;
    while (i >= 0 && idx[i] == n + 1) idx[i--] = 0;
    if (i < 0) return;
    ++idx[i];
  }
}

}  // namespace

FormulaPtr reach_formula_mcm(const MonotonicCounterMachine& m, int s, int s2) {
  check_machine(m);
  check_state(m, s, "reach formula");
  check_state(m, s2, "reach formula");
  const int n = m.counter_count;
  const long long big = m.max_constant;

  std::vector<FormulaPtr> branches;
  each_region(n, big, [&](const RegionVector& r) {
    each_region(n, big, [&](const RegionVector& r2) {
      for (std::uint32_t lam = 0; lam < (1u << n); ++lam) {
        RegionNFA nfa = build_region_nfa(m, s, r, lam, s2, r2);
        if (nfa.finals.empty()) continue;
        std::vector<TermPtr> lhs;
        for (int i = 1; i <= n; ++i) {
          TermPtr zi2 = t_var("z" + std::to_string(i) + "'");
          if ((lam >> (i - 1)) & 1)
            lhs.push_back(zi2);
          else
            lhs.push_back(t_sub(zi2, t_var("z" + std::to_string(i))));
        }
        FormulaPtr flow = flow_core(nfa, lhs);
        if (!flow) continue;
        std::vector<FormulaPtr> parts;
        for (int i = 1; i <= n; ++i) {
          parts.push_back(region_entry_atom(t_var("z" + std::to_string(i)),
                                            r[i - 1], big));
          parts.push_back(region_entry_atom(
              t_var("z" + std::to_string(i) + "'"), r2[i - 1], big));
        }
        parts.push_back(flow);
        branches.push_back(f_and(std::move(parts)));
      }
    });
  });
  return f_or(std::move(branches));
}

namespace {

FormulaPtr semilinear_member(const SemilinearSet& set, const TermPtr& t) {
  std::vector<FormulaPtr> cases;
  for (long long b : set.base) cases.push_back(f_eq(t, t_const(b)));
  for (const auto& [offset, period] : set.progressions) {
    FormulaPtr atleast = f_not(f_le(t, t_const(offset - 1)));
    if (period == 1)
      cases.push_back(atleast);
    else
      cases.push_back(f_and(
          {atleast, f_modeq(t, ((offset % period) + period) % period,
                            period)}));
  }
  return f_or(std::move(cases));
}

}  // namespace

FormulaPtr reference_reach_formula(const MonotonicCounterMachine& m, int s,
                                   const RegionVector& r, int s2,
                                   const RegionVector& r2) {
  check_machine(m);
  const int ref = m.counter_count;
  const long long big = m.max_constant;
  TermPtr zn = t_var("z" + std::to_string(ref));
  TermPtr zn2 = t_var("z" + std::to_string(ref) + "'");
  FormulaPtr source_atom = region_entry_atom(zn, r[ref - 1], big);
  FormulaPtr target_atom = region_entry_atom(zn2, r2[ref - 1], big);

  std::vector<FormulaPtr> branches;
  {
    SemilinearSet lengths =
        unary_length_semilinear(build_region_nfa_unary(m, s, r, false, s2, r2));
    if (!lengths.empty())
      branches.push_back(f_and({source_atom, target_atom,
                                semilinear_member(lengths, t_sub(zn2, zn))}));
  }
  {
    SemilinearSet lengths =
        unary_length_semilinear(build_region_nfa_unary(m, s, r, true, s2, r2));
    if (!lengths.empty())
      branches.push_back(
          f_and({source_atom, target_atom, semilinear_member(lengths, zn2)}));
  }
  return f_or(std::move(branches));
}

}  // namespace tarel
