#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "tarel/types.hpp"

using namespace tarel;

namespace {

std::string chain_key(const NType& t) {
  std::string s;
  for (const auto& cls : t.chain) {
    for (const auto& dt : cls) s += term_str(dt) + "=";
    s += "<";
  }
  return s;
}

std::vector<Rat> farey_axis(int maxden) {
  std::set<Rat> uniq;
  for (int q = 1; q <= maxden; ++q)
    for (int p = 0; p <= q; ++p) uniq.insert(Rat(p, q));
  return {uniq.begin(), uniq.end()};
}

DBM relativized_elapse(const DBM& m) {
  DBM r = time_elapse(m);
  for (int i = 1; i <= m.n; ++i)
    r = intersect_atomic(r, i, 0, bound_le(Rat(1)));
  return r;
}

DBM wrap_reference(const DBM& m) {
  DBM r = intersect_atomic(m, m.n, 0, bound_le(Rat(1)));
  r = intersect_atomic(r, 0, m.n, bound_le(Rat(-1)));
  return reset(r, m.n);
}

bool entries_on_classes(const DBM& m, const NType& tau) {
  for (const auto& b : m.e)
    if (!b.inf && class_index(tau, b.v) < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("difference term inventory and printing") {
  CHECK(all_diff_terms(1).size() == 9);
  CHECK(all_diff_terms(2).size() == 21);
  CHECK(all_diff_terms(3).size() == 39);

  CHECK(term_str({0, 0, 0}) == "0");
  CHECK(term_str({-1, 0, 0}) == "-1");
  CHECK(term_str({0, 1, 0}) == "r1");
  CHECK(term_str({0, 0, 2}) == "-r2");
  CHECK(term_str({1, 2, 1}) == "1+r2-r1");
  CHECK(term_str({-1, 1, 0}) == "-1+r1");

  CHECK(term_value({1, 2, 1}, {Rat(3, 5), Rat(0)}) == Rat(2, 5));
}

TEST_CASE("type_of orders the terms at the valuation") {
  CHECK_THROWS_AS((void)type_of({Rat(3, 2)}), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of({Rat(-1, 5)}), std::invalid_argument);

  auto tau = type_of({Rat(3, 5), Rat(0)});
  CHECK(tau.n == 2);
  // r1 > 1 - r1 at 3/5; r2 - r1 shares a class with -r1 since r2 = 0.
  CHECK(type_compare(tau, {0, 1, 0}, {1, 0, 1}) == 1);
  CHECK(type_compare(tau, {0, 0, 1}, {0, 2, 1}) == 0);
  CHECK(type_compare(tau, {0, 2, 0}, {0, 0, 0}) == 0);
  CHECK(tau.witness == std::vector<Rat>{Rat(3, 5), Rat(0)});

  // Same cell, different inhabitant.
  CHECK(tau == type_of({Rat(7, 10), Rat(0)}));
  CHECK(tau != type_of({Rat(1, 5), Rat(0)}));

  const int k = class_index(tau, Rat(-3, 5));
  REQUIRE(k >= 0);
  CHECK(tau.chain[k].front() == DiffTerm{0, 0, 1});
}

TEST_CASE("dimension one has exactly five cells") {
  auto types = enumerate_types(1);
  REQUIRE(types.size() == 5);
  const std::vector<Rat> cell_points = {Rat(0), Rat(1, 4), Rat(1, 2),
                                        Rat(3, 4), Rat(1)};
  std::set<std::string> seen;
  for (const auto& p : cell_points) {
    auto tau = type_of({p});
    bool found = false;
    for (const auto& t : types)
      if (t == tau) found = true;
    CHECK(found);
    seen.insert(chain_key(tau));
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("dimension two enumeration is complete against fine grids") {
  auto types = enumerate_types(2);
  CHECK(types.size() == 81);

  std::set<std::string> keys;
  for (const auto& t : types) {
    keys.insert(chain_key(t));
    CHECK(type_of(t.witness) == t);  // witness realizes its type
  }
  CHECK(keys.size() == types.size());

  const auto axis = farey_axis(12);
  for (const auto& a : axis)
    for (const auto& b : axis)
      CHECK(keys.count(chain_key(type_of({a, b}))) == 1);
}

TEST_CASE("dimension three streams lazily") {
  std::vector<NType> got;
  enumerate_types(3, [&](const NType& tau) {
    got.push_back(tau);
    return got.size() < 20;
  });
  REQUIRE(got.size() == 20);
  std::set<std::string> keys;
  for (const auto& t : got) {
    CHECK(type_of(t.witness) == t);
    keys.insert(chain_key(t));
  }
  CHECK(keys.size() == got.size());
}

TEST_CASE("parametric seed matrix instantiates across the cell") {
  auto tau = type_of({Rat(3, 5), Rat(0)});
  auto pd = build_M_tau(tau);
  CHECK(pd.m == dbm_of_valuation({Rat(3, 5), Rat(0)}));
  CHECK(instantiate(pd, {Rat(3, 5), Rat(0)}) ==
        dbm_of_valuation({Rat(3, 5), Rat(0)}));
  CHECK(instantiate(pd, {Rat(7, 10), Rat(0)}) ==
        dbm_of_valuation({Rat(7, 10), Rat(0)}));
  CHECK_THROWS_AS((void)instantiate(pd, {Rat(1, 5), Rat(0)}),
                  std::invalid_argument);

  auto lines = pdbm_str(pd);
  CHECK(lines.substr(0, lines.find('\n')) == "(<=, 0) (<=, -r1) (<=, 0)");
}

TEST_CASE("operations commute with instantiation across witnesses") {
  auto types = enumerate_types(2);
  REQUIRE(types.size() == 81);
  const auto axis = farey_axis(8);

  int exercised = 0;
  for (size_t ti = 0; ti < types.size(); ti += 7) {
    const auto& tau = types[ti];
    // A second inhabitant of the same cell, when one exists on the grid.
    std::vector<Rat> other;
    for (const auto& a : axis) {
      for (const auto& b : axis) {
        std::vector<Rat> g = {a, b};
        if (g != tau.witness && type_of(g) == tau) {
          other = g;
          break;
        }
      }
      if (!other.empty()) break;
    }
    if (other.empty()) continue;
    ++exercised;

    ParametricDBM pd = build_M_tau(tau);
    DBM conc = dbm_of_valuation(other);
    for (int step = 0; step < 8; ++step) {
      switch (step % 4) {
        case 0:
          pd.m = relativized_elapse(pd.m);
          conc = relativized_elapse(conc);
          break;
        case 1:
          pd.m = intersect_atomic(pd.m, 1, 0, bound_lt(Rat(1)));
          conc = intersect_atomic(conc, 1, 0, bound_lt(Rat(1)));
          break;
        case 2:
          pd.m = reset(pd.m, 1);
          conc = reset(conc, 1);
          break;
        default:
          pd.m = wrap_reference(pd.m);
          conc = wrap_reference(conc);
          break;
      }
      const bool pc = is_consistent(canonicalize(pd.m));
      const bool cc = is_consistent(canonicalize(conc));
      CHECK(pc == cc);
      if (!pc) break;
      CHECK(entries_on_classes(pd.m, tau));
      CHECK(instantiate(pd, other) == conc);
    }
  }
  CHECK(exercised >= 8);
}
