#include <doctest.h>

#include <random>

#include "tarel/formula.hpp"

using namespace tarel;

namespace {

Assignment assign(std::initializer_list<std::pair<const char*, Rat>> reals,
                  std::initializer_list<std::pair<const char*, std::int64_t>> ints) {
  Assignment a;
  for (auto& [k, v] : reals) a.set(k, v);
  for (auto& [k, v] : ints) a.set(k, v);
  return a;
}

}  // namespace

TEST_CASE("variable families carry the sort") {
  CHECK(sort_of_var("r1") == Sort::real);
  CHECK(sort_of_var("r12'") == Sort::real);
  CHECK(sort_of_var("s3") == Sort::real);
  CHECK(sort_of_var("z2") == Sort::integer);
  CHECK(sort_of_var("z2'") == Sort::integer);
  CHECK(sort_of_var("w7") == Sort::integer);
  CHECK_THROWS_AS(sort_of_var("x1"), std::invalid_argument);
  CHECK_THROWS_AS(sort_of_var("r"), std::invalid_argument);
  CHECK_THROWS_AS(sort_of_var("r1''"), std::invalid_argument);
}

TEST_CASE("eval of atoms and connectives") {
  // first Example-1 style disjunct: z2'-z1' = 1 and 0 <= r2'-r1' < r2-r1
  auto d = t_sub(t_var("r2'"), t_var("r1'"));
  auto gap = t_sub(t_var("r2"), t_var("r1"));
  auto f = f_and({f_eq(t_sub(t_var("z2'"), t_var("z1'")), t_const(1)),
                  f_le(t_const(0), d), f_lt(d, gap)});
  auto a = assign({{"r1", Rat(1, 5)}, {"r2", Rat(1, 2)}, {"r1'", Rat(0)}, {"r2'", Rat(1, 10)}},
                  {{"z1'", 0}, {"z2'", 1}});
  CHECK(eval(f, a));
  a.set("z2'", (std::int64_t)2);
  CHECK_FALSE(eval(f, a));

  CHECK(eval(f_le(t_var("r1"), t_var("r1")), assign({{"r1", Rat(7, 3)}}, {})));

  auto m = f_modeq(t_sub(t_var("z1"), t_var("z2")), 0, 2);
  CHECK(eval(m, assign({}, {{"z1", 4}, {"z2", 2}})));
  CHECK_FALSE(eval(m, assign({}, {{"z1", 3}, {"z2", 2}})));
  CHECK(eval(m, assign({}, {{"z1", 0}, {"z2", 4}})));  // negative difference

  CHECK_THROWS_AS(eval(f, Assignment{}), std::invalid_argument);
  CHECK_THROWS_AS(eval(f_exists("r1", f_true()), Assignment{}), std::invalid_argument);
}

TEST_CASE("sort discipline") {
  CHECK_THROWS_AS(check_sorts(f_le(t_var("r1"), t_var("z1"))), std::invalid_argument);
  CHECK_THROWS_AS(term_sort(t_add(t_var("r1"), t_var("z1"))), std::invalid_argument);
  CHECK_NOTHROW(check_sorts(f_le(t_var("z1"), t_const(3))));
  CHECK_THROWS_AS(check_sorts(f_le(t_var("z1"), t_const(Rat(1, 2)))), std::invalid_argument);
  CHECK_THROWS_AS(check_sorts(f_modeq(t_var("r1"), 0, 2)), std::invalid_argument);
}

TEST_CASE("linearize") {
  auto t = t_sub(t_add(t_var("r1"), t_var("r1")), t_const(Rat(1, 2)));
  LinearTerm lt = linearize(t);
  CHECK(lt.coeff.at("r1") == 2);
  CHECK(lt.constant == Rat(-1, 2));

  // cancelling occurrences drop out entirely
  LinearTerm z = linearize(t_sub(t_var("z1"), t_var("z1")));
  CHECK(z.coeff.empty());
  CHECK(z.constant == Rat(0));

  LinearTerm neg = linearize(t_sub({t_add(t_var("z1"), t_const(3))}));
  CHECK(neg.coeff.at("z1") == -1);
  CHECK(neg.constant == Rat(-3));
}

TEST_CASE("serialize matches the documented format") {
  auto ex2 = f_and({f_eq(t_var("r1"), t_const(0)), f_eq(t_var("r2"), t_const(0)),
                    f_eq(t_var("r1'"), t_var("r2'")), f_eq(t_var("z1"), t_const(0)),
                    f_eq(t_var("z2"), t_const(0)),
                    f_modeq(t_sub(t_var("z2'"), t_var("z1'")), 0, 2)});
  CHECK(serialize(ex2) ==
        "(and (= r1 0) (= r2 0) (= r1' r2') (= z1 0) (= z2 0) (mod= (- z2' z1') 0 2))");
  CHECK(serialize(parse_formula(serialize(ex2))) == serialize(ex2));
  CHECK(is_Lstar(ex2));

  CHECK(serialize(f_true()) == "(true)");
  CHECK(parse_formula("(true)")->kind == Formula::Kind::verum);
  CHECK(serialize(f_lt(t_const(Rat(1, 2)), t_var("s1"))) == "(< 1/2 s1)");
}

TEST_CASE("parser rejects malformed input with an offset") {
  CHECK_THROWS_WITH_AS(parse_formula("(<= r1)"), doctest::Contains("offset"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(<= r1 z1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(mod= z1 0 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(bogus r1 r2)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(true) junk"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(exists-r z1 (true))"), std::invalid_argument);
  CHECK_THROWS_AS(parse_formula("(<= 0.5 r1)"), std::invalid_argument);
}

TEST_CASE("substitute and free_vars") {
  auto f = f_exists("r1", f_lt(t_var("r1"), t_var("r2")));
  std::map<std::string, Sort> fv;
  free_vars(f, fv);
  CHECK(fv.size() == 1);
  CHECK(fv.count("r2") == 1);

  auto g = substitute(f, "r2", Rat(1, 3));
  fv.clear();
  free_vars(g, fv);
  CHECK(fv.empty());
  CHECK(serialize(g) == "(exists-r r1 (< r1 1/3))");
  // bound occurrences are untouched
  CHECK(serialize(substitute(f, "r1", Rat(0))) == serialize(f));
}

TEST_CASE("is_Lstar fragment membership") {
  CHECK(is_Lstar(parse_formula("(<= (- z1 z2) 3)")));
  CHECK(is_Lstar(parse_formula("(<= z1 3)")));
  CHECK(is_Lstar(parse_formula("(= z1 0)")));
  CHECK(is_Lstar(parse_formula("(mod= z1 1 3)")));  // single-variable extension
  CHECK(is_Lstar(parse_formula("(<= (+ r1 r2) (- r3 1/2))")));  // real atoms unrestricted
  CHECK_FALSE(is_Lstar(parse_formula("(<= (+ z1 z2) 3)")));
  CHECK_FALSE(is_Lstar(parse_formula("(<= (+ z1 z1) 4)")));
  CHECK_FALSE(is_Lstar(parse_formula("(mod= (+ z1 z2) 0 2)")));
}

TEST_CASE("round-trip fuzz over random small ASTs") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 99);
  auto rnd_term = [&](Sort s, auto&& self, int depth) -> TermPtr {
    int p = pick(rng);
    if (depth >= 3 || p < 40) {
      if (p % 2 == 0) {
        std::int64_t c = pick(rng) % 5 - 2;
        return s == Sort::real && p % 4 == 0 ? t_const(Rat(c, 2)) : t_const(c);
      }
      std::string base = s == Sort::real ? "r" : "z";
      return t_var(base + std::to_string(1 + p % 3) + (p % 3 == 2 ? "'" : ""));
    }
    if (p < 70) return t_add(self(s, self, depth + 1), self(s, self, depth + 1));
    if (p < 85) return t_sub(self(s, self, depth + 1), self(s, self, depth + 1));
    return t_sub({self(s, self, depth + 1)});
  };
  auto rnd_formula = [&](auto&& self, int depth) -> FormulaPtr {
    int p = pick(rng);
    if (depth >= 3 || p < 40) {
      Sort s = p % 2 == 0 ? Sort::real : Sort::integer;
      auto a = rnd_term(s, rnd_term, 0), b = rnd_term(s, rnd_term, 0);
      switch (p % 3) {
        case 0: return f_le(a, b);
        case 1: return f_lt(a, b);
        default: return f_eq(a, b);
      }
    }
    if (p < 60) return f_and({self(self, depth + 1), self(self, depth + 1)});
    if (p < 80) return f_or({self(self, depth + 1), self(self, depth + 1)});
    if (p < 90) return f_not(self(self, depth + 1));
    return f_modeq(rnd_term(Sort::integer, rnd_term, 1), pick(rng) % 3, 1 + pick(rng) % 3);
  };
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = rnd_formula(rnd_formula, 0);
    std::string s = serialize(f);
    CAPTURE(s);
    FormulaPtr g = parse_formula(s);
    CHECK(serialize(g) == s);
  }
}
