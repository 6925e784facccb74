#include "tarel/oracle.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

namespace tarel {

namespace {

int location_index(const TimedAutomaton& ta, const std::string& name) {
  for (std::size_t i = 0; i < ta.locations.size(); ++i)
    if (ta.locations[i] == name) return (int)i;
  throw std::invalid_argument("unknown location: " + name);
}

// Value in grid units, top meaning "above every guard constant".
bool atom_holds_units(const GuardAtom& a, long long u, long long d) {
  const long long k = a.k * d;
  switch (a.rel) {
    case GuardRel::lt: return u < k;
    case GuardRel::eq: return u == k;
    case GuardRel::open_unit: return k < u && u < k + d;
    case GuardRel::ge: return u >= k;
    case GuardRel::gt: return u > k;
  }
  return false;
}

std::vector<long long> to_units(const std::vector<Rat>& val, long long d,
                                long long cap) {
  std::vector<long long> out;
  out.reserve(val.size());
  for (const Rat& v : val) {
    Rat scaled = v * Rat(d);
    if (!scaled.is_integer() || v < Rat(0))
      throw std::invalid_argument("endpoint off grid: " + v.str());
    long long u = scaled.floor();
    if (u > cap) throw std::invalid_argument("endpoint above cap: " + v.str());
    out.push_back(u);
  }
  return out;
}

}  // namespace

bool grid_reach(const TimedAutomaton& ta, const Config& from, const Config& to,
                const GridParams& gp) {
  if (gp.denominator < 1) throw std::invalid_argument("denominator < 1");
  if (gp.int_cap < 0) throw std::invalid_argument("negative cap");
  const int n = ta.clock_count;
  if ((int)from.val.size() != n || (int)to.val.size() != n)
    throw std::invalid_argument("valuation arity mismatch");

  long long c = std::max(gp.int_cap, ta.max_constant) + 1;
  const long long top = c * gp.denominator;
  const long long radix = top + 1;

  const int l_from = location_index(ta, from.location);
  const int l_to = location_index(ta, to.location);
  std::vector<long long> u_from = to_units(from.val, gp.denominator, top);
  std::vector<long long> u_to = to_units(to.val, gp.denominator, top);
  std::vector<int> edge_target(ta.edges.size());
  std::vector<int> edge_source(ta.edges.size());
  for (std::size_t ei = 0; ei < ta.edges.size(); ++ei) {
    edge_source[ei] = location_index(ta, ta.edges[ei].source);
    edge_target[ei] = location_index(ta, ta.edges[ei].target);
  }

  long long space = (long long)ta.locations.size();
  for (int i = 0; i < n; ++i) {
    if (space > gp.step_budget / radix + 1)
      throw std::runtime_error("grid search budget exhausted");
    space *= radix;
  }
  if (space > gp.step_budget)
    throw std::runtime_error("grid search budget exhausted");

  auto encode = [&](int loc, const std::vector<long long>& u) {
    long long key = loc;
    for (int i = 0; i < n; ++i) key = key * radix + u[i];
    return key;
  };

  std::vector<bool> seen((std::size_t)space, false);
  std::deque<std::pair<int, std::vector<long long>>> queue;
  seen[(std::size_t)encode(l_from, u_from)] = true;
  queue.emplace_back(l_from, u_from);
  while (!queue.empty()) {
    auto [loc, u] = queue.front();
    queue.pop_front();
    if (loc == l_to && u == u_to) return true;

    auto visit = [&](int loc2, const std::vector<long long>& u2) {
      long long key = encode(loc2, u2);
      if (!seen[(std::size_t)key]) {
        seen[(std::size_t)key] = true;
        queue.emplace_back(loc2, u2);
      }
    };

    std::vector<long long> delayed(u);
    for (long long& v : delayed) v = std::min(v + 1, top);
    visit(loc, delayed);

    for (std::size_t ei = 0; ei < ta.edges.size(); ++ei) {
      const Edge& e = ta.edges[ei];
      if (edge_source[ei] != loc) continue;
      bool ok = true;
      for (const GuardAtom& a : e.guard)
        if (!atom_holds_units(a, u[a.clock - 1], gp.denominator)) ok = false;
      if (!ok) continue;
      std::vector<long long> u2(u);
      for (int r : e.resets) u2[r - 1] = 0;
      visit(edge_target[ei], u2);
    }
  }
  return false;
}

}  // namespace tarel
