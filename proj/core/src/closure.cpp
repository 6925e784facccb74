#include "tarel/closure.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace tarel {

namespace {

// Binary entry encoding; canonical forms are unique, so entry equality
// is zone equality.
std::string dbm_key(const DBM& m) {
  std::string k;
  k.reserve(m.e.size() * 3 * sizeof(std::int64_t));
  for (const auto& b : m.e) {
    const std::int64_t enc[3] = {
        b.inf ? 2 : (b.s == Strictness::strict ? 1 : 0),
        b.inf ? 0 : b.v.num(), b.inf ? 1 : b.v.den()};
    k.append(reinterpret_cast<const char*>(enc), sizeof enc);
  }
  return k;
}

}  // namespace

DBM relativized_elapse(const DBM& m) {
  DBM r = time_elapse(m);
  for (int i = 1; i <= m.n; ++i)
    r = intersect_atomic(r, i, 0, bound_le(Rat(1)));
  return r;
}

DBM wrap_clock(const DBM& m, int i) {
  DBM r = intersect_atomic(m, i, 0, bound_le(Rat(1)));
  r = intersect_atomic(r, 0, i, bound_le(Rat(-1)));
  return reset(r, i);
}

ClosureSet compute_closure(const DBM& seed, ClosureMode) {
  if (!seed.canonical)
    throw std::invalid_argument("compute_closure: seed not canonical");
  if (!is_consistent(seed))
    throw std::invalid_argument("compute_closure: seed inconsistent");
  if (!structural_checks(seed, std::nullopt).one_bounded)
    throw std::invalid_argument("compute_closure: seed not 1-bounded");

  ClosureSet cs;
  cs.seed = seed;
  std::unordered_map<std::string, int> index;
  index.reserve(1 << 12);
  std::deque<int> work;

  auto add = [&](DBM m, ClosureStep step) {
    if (!is_consistent(m)) return;
    auto [it, fresh] = index.emplace(dbm_key(m),
                                     static_cast<int>(cs.members.size()));
    if (!fresh) return;
    cs.members.push_back(std::move(m));
    cs.produced.push_back(step);
    work.push_back(it->second);
  };

  add(seed, ClosureStep{});
  const int n = seed.n;
  const Bound zero = bound_le(Rat(0));
  while (!work.empty()) {
    const int idx = work.front();
    work.pop_front();
    const DBM cur = cs.members[idx];  // copy: members may reallocate

    add(relativized_elapse(cur),
        ClosureStep{ClosureStep::Kind::elapse, idx, 0, 0, Bound{}, 0});
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        if (p == q) continue;
        for (int c = -1; c <= 1; ++c)
          for (const Bound b : {bound_le(Rat(c)), bound_lt(Rat(c))}) {
            // Redundant unless it tightens (p,q); inconsistent as soon
            // as the opposite entry closes a negative cycle with it.
            if (!bound_lt_v(b, cur.at(p, q))) continue;
            if (bound_lt_v(bound_add(b, cur.at(q, p)), zero)) continue;
            add(intersect_atomic(cur, p, q, b),
                ClosureStep{ClosureStep::Kind::atom, idx, p, q, b, 0});
          }
      }
    for (int i = 1; i < n; ++i)
      add(reset(cur, i),
          ClosureStep{ClosureStep::Kind::reset, idx, 0, 0, Bound{}, i});
    add(wrap_clock(cur, n),
        ClosureStep{ClosureStep::Kind::wrap, idx, 0, 0, Bound{}, n});
  }
  return cs;
}

ClosureSet compute_closure(const ParametricDBM& pd) {
  ClosureSet cs = compute_closure(pd.m, ClosureMode::parametric);
  cs.tau = pd.tau;
  return cs;
}

std::string closure_dump(const ClosureSet& cs) {
  std::vector<std::string> blocks;
  blocks.reserve(cs.members.size());
  for (const auto& m : cs.members) blocks.push_back(dbm_str(m));
  std::sort(blocks.begin(), blocks.end());
  std::string out;
  for (const auto& b : blocks) {
    out += b;
    out += '\n';
  }
  return out;
}

}  // namespace tarel
