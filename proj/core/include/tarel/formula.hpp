#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tarel/rational.hpp"

namespace tarel {

// Two-sorted linear arithmetic over (R, <=, +) and (Z, <=, +, mod).
// Variable sort is carried by the name family: r*/s* real, z*/w* integer.

enum class Sort { real, integer };

Sort sort_of_var(const std::string& name);  // throws on unknown family
bool is_valid_var(const std::string& name);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { constant, variable, add, sub };
  Kind kind;
  Rat value;              // constant
  std::string var;        // variable
  std::vector<TermPtr> args;  // add: >=2 operands; sub: 1 (negation) or >=2 (left fold)
};

TermPtr t_const(const Rat& v);
TermPtr t_const(std::int64_t v);
TermPtr t_var(const std::string& name);
TermPtr t_add(std::vector<TermPtr> args);
TermPtr t_sub(std::vector<TermPtr> args);
TermPtr t_add(const TermPtr& a, const TermPtr& b);
TermPtr t_sub(const TermPtr& a, const TermPtr& b);

// Sum of per-variable integer coefficients plus a rational constant.
// Every term of the language linearizes this way (coefficients stay integral
// because the grammar has no multiplication).
struct LinearTerm {
  std::map<std::string, std::int64_t> coeff;  // zero coefficients erased
  Rat constant;
};
LinearTerm linearize(const TermPtr& t);

enum class CmpOp { le, lt, eq };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { verum, falsum, cmp, modeq, conj, disj, neg, exists, forall };
  Kind kind;

  CmpOp op = CmpOp::le;       // cmp
  TermPtr lhs, rhs;           // cmp
  TermPtr mod_term;           // modeq: mod_term == mod_c (mod mod_d)
  std::int64_t mod_c = 0, mod_d = 1;

  std::vector<FormulaPtr> kids;  // conj/disj (n-ary), neg (1)

  std::string bound_var;  // exists/forall
  FormulaPtr body;        // exists/forall
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_cmp(CmpOp op, const TermPtr& lhs, const TermPtr& rhs);
FormulaPtr f_le(const TermPtr& a, const TermPtr& b);
FormulaPtr f_lt(const TermPtr& a, const TermPtr& b);
FormulaPtr f_eq(const TermPtr& a, const TermPtr& b);
FormulaPtr f_modeq(const TermPtr& t, std::int64_t c, std::int64_t d);
FormulaPtr f_and(std::vector<FormulaPtr> kids);  // flattens; empty -> true
FormulaPtr f_or(std::vector<FormulaPtr> kids);   // flattens; empty -> false
FormulaPtr f_not(const FormulaPtr& f);
FormulaPtr f_exists(const std::string& var, const FormulaPtr& body);
FormulaPtr f_forall(const std::string& var, const FormulaPtr& body);

// Sort of a term: variables by name family, constants adopt context. Mixed
// real/integer addition is rejected here.
// Returns the sort if the term mentions a variable, otherwise nullopt-like
// "constant-only" handled by the bool flag.
struct TermSort {
  bool has_var = false;
  Sort sort = Sort::real;
};
TermSort term_sort(const TermPtr& t);

// Structural well-formedness: atoms never mix sorts, mod atoms are integral,
// bound variables have a known family matching their uses.
void check_sorts(const FormulaPtr& f);

struct Assignment {
  std::map<std::string, Rat> real_vals;
  std::map<std::string, std::int64_t> int_vals;

  void set(const std::string& var, const Rat& v);
  void set(const std::string& var, std::int64_t v);
  bool has(const std::string& var) const;
};

// Standard semantics, exact arithmetic. Quantifier-free formulas only; a
// quantifier node or an unbound variable raises.
bool eval(const FormulaPtr& f, const Assignment& a);
Rat eval_term(const TermPtr& t, const Assignment& a);

// Free variables, by sort.
void free_vars(const FormulaPtr& f, std::map<std::string, Sort>& out);

// Capture-avoiding substitution of a constant for a free variable.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Rat& value);
TermPtr substitute(const TermPtr& t, const std::string& var, const Rat& value);

// Membership in the restricted fragment: integer atoms must linearize to
// z - z' <= c, z <= c (equality as the conjunction of both directions), or
// z - z' == c (mod d); a single-variable mod atom z == c (mod d) is accepted
// as a documented extension. Real atoms are unrestricted.
bool is_Lstar(const FormulaPtr& f);

// Formula plus term nodes, shared subtrees counted once.
long long formula_node_count(const FormulaPtr& f);

// S-expression syntax:
//   (<= t t') (< t t') (= t t') (mod= t c d) (true) (false)
//   (and f...) (or f...) (not f)
//   (exists-r v f) (exists-z v f) (forall-r v f) (forall-z v f)
//   terms: (+ t t...) (- t t...) constants "p/q" variables rK zK rK' zK' wK sK
std::string serialize(const FormulaPtr& f);
std::string serialize(const TermPtr& t);
FormulaPtr parse_formula(const std::string& text);  // malformed -> std::invalid_argument with offset

}  // namespace tarel
