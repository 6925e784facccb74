#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <tarel/ta.hpp>

using namespace tarel;

namespace {

const char* kFig3Source =
    "# one guarded edge, x2 is the reference\n"
    "clocks: x1 ref x2\n"
    "location l0\n"
    "location l1\n"
    "edge l0 -> l1 guard \"0<x1<1\" reset x1\n";

std::vector<Rat> floors_of(const std::vector<Rat>& v) {
  std::vector<Rat> out;
  for (const Rat& x : v) out.push_back(Rat(x.floor()));
  return out;
}

std::vector<long long> ifloors_of(const std::vector<Rat>& v) {
  std::vector<long long> out;
  for (const Rat& x : v) out.push_back(x.floor());
  return out;
}

std::vector<Rat> fracs_of(const std::vector<Rat>& v) {
  std::vector<Rat> out;
  for (const Rat& x : v) out.push_back(x.frac());
  return out;
}

int parse_error_line(const std::string& src) {
  try {
    parse_timed_automaton(src);
  } catch (const TaParseError& e) {
    return e.line;
  }
  return -1;
}

std::string parse_error_msg(const std::string& src) {
  try {
    parse_timed_automaton(src);
  } catch (const TaParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parsing the two-location one-edge automaton") {
  TimedAutomaton ta = parse_timed_automaton(kFig3Source);
  CHECK(ta.locations == std::vector<std::string>{"l0", "l1"});
  CHECK(ta.clock_count == 2);
  CHECK(ta.has_reference);
  REQUIRE(ta.edges.size() == 1);
  const Edge& e = ta.edges[0];
  CHECK(e.source == "l0");
  CHECK(e.target == "l1");
  REQUIRE(e.guard.size() == 1);
  CHECK(e.guard[0] == GuardAtom{1, GuardRel::open_unit, 0});
  CHECK(e.resets == std::vector<int>{1});
  CHECK(ta.max_constant == 1);
  CHECK(guard_str(e.guard) == "0<x1<1");

  // both spellings of the reference designation are accepted
  TimedAutomaton alt = parse_timed_automaton(
      "clocks: x1 x2 ref x2\nlocation l0\nlocation l1\n"
      "edge l0 -> l1 guard \"0<x1<1\" reset x1\n");
  CHECK(alt.clock_count == 2);
  CHECK(alt.has_reference);
  REQUIRE(alt.edges.size() == 1);
  CHECK(alt.edges[0].guard == ta.edges[0].guard);
}

TEST_CASE("minimal and labelled sources") {
  TimedAutomaton empty = parse_timed_automaton("clocks: x1\n");
  CHECK(empty.clock_count == 1);
  CHECK_FALSE(empty.has_reference);
  CHECK(empty.edges.empty());
  CHECK(empty.max_constant == 0);

  TimedAutomaton lab = parse_timed_automaton(
      "clocks: x1 x2\n"
      "location l0 [p1, p2]\n"
      "location l1 []\n"
      "location l2\n"
      "edge l0 -> l2 guard \"true\"\n");
  CHECK(lab.labels.at("l0") == std::vector<std::string>{"p1", "p2"});
  CHECK(lab.labels.at("l1").empty());
  CHECK(lab.labels.count("l2") == 0);
  REQUIRE(lab.edges.size() == 1);
  CHECK(lab.edges[0].guard.empty());  // "true"
  CHECK(lab.edges[0].resets.empty());
}

TEST_CASE("parse errors carry line and column and name the offence") {
  // diagonal constraints, both spellings
  std::string diag1 =
      "clocks: x1 x2\nlocation a\nlocation b\n"
      "edge a -> b guard \"x1 - x2 < 1\"\n";
  CHECK(parse_error_msg(diag1).find("diagonal constraint") != std::string::npos);
  CHECK(parse_error_line(diag1) == 4);
  std::string diag2 =
      "clocks: x1 x2\nlocation a\nlocation b\n"
      "edge a -> b guard \"x1<x2\"\n";
  CHECK(parse_error_msg(diag2).find("diagonal constraint") != std::string::npos);

  // reset of the designated reference clock
  std::string refreset =
      "clocks: x1 ref x2\nlocation a\nlocation b\n"
      "edge a -> b reset x2\n";
  CHECK(parse_error_msg(refreset).find("reference clock x2") != std::string::npos);

  // assorted syntax errors
  CHECK(parse_error_msg("clocks: x1\nlocation a\nlocation b\n"
                        "edge a -> b guard \"x1<=2\"\n")
            .find("'<='") != std::string::npos);
  CHECK(parse_error_line("clocks: x1\nlocation a\nlocation b\n"
                         "edge a -> b guard \"0<x1<2\"\n") == 4);
  CHECK(parse_error_line("clocks: x1\nlocation a\nedge a -> nowhere\n") == 3);
  CHECK(parse_error_line("clocks: x1\nlocation a\nlocation a\n") == 3);
  CHECK(parse_error_line("clocks: x1\nlocation a\nlocation b\n"
                         "edge a -> b guard \"x3<1\"\n") == 4);
  CHECK(parse_error_line("location a\nclocks: x1\n") == 1);
  CHECK(parse_error_line("") == 1);
  CHECK(parse_error_line("clocks: x1 x3\n") == 1);

  // column of the diagonal offence points into the guard text
  try {
    parse_timed_automaton(diag2);
    CHECK(false);
  } catch (const TaParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.column > 20);  // inside the quoted guard
  }
}

TEST_CASE("normalization appends a reference clock and is idempotent") {
  TimedAutomaton ta = parse_timed_automaton(
      "clocks: x1 x2\n"
      "location a\nlocation b\n"
      "edge a -> b guard \"x1=1\" reset x1\n");
  CHECK_FALSE(ta.has_reference);
  TimedAutomaton n = normalize_automaton(ta);
  CHECK(n.clock_count == 3);
  CHECK(n.has_reference);
  CHECK(n.edges.size() == 1);

  TimedAutomaton again = normalize_automaton(n);
  CHECK(again.clock_count == n.clock_count);
  CHECK(again.locations == n.locations);
  REQUIRE(again.edges.size() == n.edges.size());
  for (std::size_t i = 0; i < n.edges.size(); ++i) {
    CHECK(again.edges[i].guard == n.edges[i].guard);
    CHECK(again.edges[i].resets == n.edges[i].resets);
    CHECK(again.edges[i].source == n.edges[i].source);
    CHECK(again.edges[i].target == n.edges[i].target);
  }
}

TEST_CASE("normalization splits x>k into its fractional and integer cases") {
  TimedAutomaton ta = parse_timed_automaton(
      "clocks: x1 x2 ref x2\n"
      "location a\nlocation b\n"
      "edge a -> b guard \"x1>1\"\n");
  CHECK(ta.max_constant == 2);
  TimedAutomaton n = normalize_automaton(ta);
  REQUIRE(n.edges.size() == 2);
  std::set<std::string> guards;
  for (const Edge& e : n.edges) guards.insert(guard_str(e.guard));
  CHECK(guards == std::set<std::string>{"1<x1<2", "x1>=2"});
  CHECK(n.max_constant == 2);

  // a conjunction of two gt atoms yields all four combinations
  TimedAutomaton ta2 = parse_timed_automaton(
      "clocks: x1 x2 x3 ref x3\n"
      "location a\nlocation b\n"
      "edge a -> b guard \"x1>0 & x2>0\"\n");
  TimedAutomaton n2 = normalize_automaton(ta2);
  CHECK(n2.edges.size() == 4);
  for (const Edge& e : n2.edges)
    for (const GuardAtom& g : e.guard) CHECK(g.rel != GuardRel::gt);
}

TEST_CASE("normalization splits multi-reset edges into zero-delay chains") {
  TimedAutomaton ta = parse_timed_automaton(
      "clocks: x1 x2 x3 ref x3\n"
      "location a\nlocation b\n"
      "edge a -> b guard \"x1=1\" reset x1,x2\n");
  TimedAutomaton n = normalize_automaton(ta);
  REQUIRE(n.edges.size() == 2);
  CHECK(n.locations.size() == 3);  // one fresh location
  const Edge& e1 = n.edges[0];
  const Edge& e2 = n.edges[1];
  CHECK(e1.source == "a");
  CHECK(e1.target == e2.source);
  CHECK(e2.target == "b");
  CHECK(e1.guard == Guard{{1, GuardRel::eq, 1}});
  CHECK(e1.resets == std::vector<int>{1});
  // the follow-up edge is pinned to the same instant by x1=0
  CHECK(e2.guard == Guard{{1, GuardRel::eq, 0}});
  CHECK(e2.resets == std::vector<int>{2});

  // chain semantics: firing both edges back to back equals the atomic reset,
  // and any positive delay in the middle disables the second edge
  Config c{"a", {Rat(1), Rat(1, 2), Rat(2)}};
  Config mid = concrete_step(n, c, act_edge(0));
  Config done = concrete_step(n, mid, act_edge(1));
  CHECK(done.location == "b");
  CHECK(done.val == std::vector<Rat>{Rat(0), Rat(0), Rat(2)});
  Config delayed = concrete_step(n, mid, act_delay(Rat(1, 4)));
  CHECK_THROWS_WITH_AS(concrete_step(n, delayed, act_edge(1)), "edge not enabled",
                       std::runtime_error);
}

TEST_CASE("guard decomposition follows the table") {
  GuardSplit s = decompose_guard({{1, GuardRel::open_unit, 0}});
  REQUIRE(s.int_part.size() == 1);
  REQUIRE(s.frac_part.size() == 1);
  CHECK(s.int_part[0].counter == 1);
  CHECK(s.int_part[0].rel == IntRel::eq);
  CHECK(s.int_part[0].k == 0);
  CHECK(s.frac_part[0].rel == FracRel::open01);

  s = decompose_guard({{2, GuardRel::lt, 3}});
  CHECK(s.int_part[0].rel == IntRel::le);
  CHECK(s.int_part[0].k == 2);
  CHECK(s.frac_part[0].rel == FracRel::lt1);

  s = decompose_guard({{1, GuardRel::eq, 2}});
  CHECK(s.int_part[0].rel == IntRel::eq);
  CHECK(s.int_part[0].k == 2);
  CHECK(s.frac_part[0].rel == FracRel::eq0);

  s = decompose_guard({{1, GuardRel::ge, 1}});
  CHECK(s.int_part[0].rel == IntRel::ge);
  CHECK(s.int_part[0].k == 1);
  CHECK(s.frac_part[0].rel == FracRel::ge0);

  s = decompose_guard({});
  CHECK(s.int_part.empty());
  CHECK(s.frac_part.empty());

  CHECK_THROWS_AS(decompose_guard({{1, GuardRel::gt, 1}}), std::logic_error);
}

TEST_CASE("guard decomposition is exact on random guards and valuations") {
  std::mt19937 rng(20260822);
  std::uniform_int_distribution<int> n_atoms(0, 3);
  std::uniform_int_distribution<int> clock_d(1, 3);
  std::uniform_int_distribution<int> rel_d(0, 3);
  std::uniform_int_distribution<long long> k_d(0, 3);
  std::uniform_int_distribution<int> num_d(0, 32);
  std::uniform_int_distribution<int> den_d(1, 8);

  for (int iter = 0; iter < 1000; ++iter) {
    Guard g;
    int m = n_atoms(rng);
    for (int i = 0; i < m; ++i) {
      GuardRel rel = static_cast<GuardRel>(rel_d(rng));  // lt, eq, open_unit, ge
      g.push_back({clock_d(rng), rel, k_d(rng)});
    }
    std::vector<Rat> v;
    for (int i = 0; i < 3; ++i) v.push_back(Rat(num_d(rng), den_d(rng)));

    GuardSplit s = decompose_guard(g);
    bool direct = guard_sat(g, v);
    bool split = int_sat(s.int_part, ifloors_of(v)) && frac_sat(s.frac_part, fracs_of(v));
    CAPTURE(guard_str(g));
    CAPTURE(iter);
    CHECK(direct == split);
  }
}

TEST_CASE("concrete steps: delay, edge, and their error cases") {
  TimedAutomaton ta = parse_timed_automaton(kFig3Source);

  Config c0{"l0", {Rat(0), Rat(0)}};
  Config d = concrete_step(ta, c0, act_delay(Rat(3, 10)));
  CHECK(d.location == "l0");
  CHECK(d.val == std::vector<Rat>{Rat(3, 10), Rat(3, 10)});

  // delay(0) is the identity
  Config z = concrete_step(ta, d, act_delay(Rat(0)));
  CHECK(z.val == d.val);
  CHECK(z.location == d.location);

  Config c{"l0", {Rat(9, 10), Rat(3, 10)}};
  Config after = concrete_step(ta, c, act_edge(0));
  CHECK(after.location == "l1");
  CHECK(after.val == std::vector<Rat>{Rat(0), Rat(3, 10)});

  // determinism
  Config again = concrete_step(ta, c, act_edge(0));
  CHECK(again.location == after.location);
  CHECK(again.val == after.val);

  // guard violation and location mismatch
  Config bad{"l0", {Rat(1), Rat(0)}};
  CHECK_THROWS_WITH_AS(concrete_step(ta, bad, act_edge(0)), "edge not enabled",
                       std::runtime_error);
  Config wrongloc{"l1", {Rat(1, 2), Rat(0)}};
  CHECK_THROWS_WITH_AS(concrete_step(ta, wrongloc, act_edge(0)), "edge not enabled",
                       std::runtime_error);

  CHECK_THROWS_AS(concrete_step(ta, c, act_delay(Rat(-1, 2))), std::invalid_argument);
  Config shortval{"l0", {Rat(0)}};
  CHECK_THROWS_AS(concrete_step(ta, shortval, act_edge(0)), std::invalid_argument);

  // an equality guard at the wrong value
  TimedAutomaton eq = parse_timed_automaton(
      "clocks: x1 x2 ref x2\nlocation a\nlocation b\n"
      "edge a -> b guard \"x2=1\"\n");
  Config at1{"a", {Rat(0), Rat(1)}};
  Config not1{"a", {Rat(0), Rat(1, 2)}};
  CHECK(concrete_step(eq, at1, act_edge(0)).location == "b");
  CHECK_THROWS_WITH_AS(concrete_step(eq, not1, act_edge(0)), "edge not enabled",
                       std::runtime_error);
  (void)floors_of;
}
