#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tarel/dbm.hpp"
#include "tarel/rational.hpp"

namespace tarel {

// Difference term c + r_i - r_j with c in {-1,0,1} and clock indices in
// 0..n (r_0 = 0). Constants are canonicalized to (c,0,0) so each value
// function appears once.
struct DiffTerm {
  int c = 0;
  int i = 0;
  int j = 0;
};

bool operator==(const DiffTerm& a, const DiffTerm& b);
bool operator<(const DiffTerm& a, const DiffTerm& b);  // lex (c,i,j)
std::string term_str(const DiffTerm& t);
Rat term_value(const DiffTerm& t, const std::vector<Rat>& nu);

// Canonical difference terms for dimension n, lex-sorted.
std::vector<DiffTerm> all_diff_terms(int n);

// Order type of a valuation: the total preorder the valuation induces on
// the difference terms, stored as an ascending chain of equal-value
// classes. Class members are lex-sorted, so front() is the class
// representative. Two types are equal iff their chains coincide; the
// witness is one interior-respecting inhabitant.
struct NType {
  int n = 0;
  std::vector<std::vector<DiffTerm>> chain;
  std::vector<Rat> witness;
  std::vector<Rat> class_value;  // chain values at the witness, ascending
};

bool operator==(const NType& a, const NType& b);  // chains only
bool operator!=(const NType& a, const NType& b);

// -1/0/+1 as the type orders t1 against t2.
int type_compare(const NType& tau, const DiffTerm& t1, const DiffTerm& t2);
// Index into the chain for a value at the witness; -1 when no class
// carries that value.
int class_index(const NType& tau, const Rat& v);
std::string type_str(const NType& tau);

// Errors when a coordinate leaves [0,1].
NType type_of(const std::vector<Rat>& nu);

// Emits every realizable type exactly once, in a deterministic order;
// the callback returns false to stop early.
void enumerate_types(int n, const std::function<bool(const NType&)>& yield);
std::vector<NType> enumerate_types(int n);

// Parametric DBM: entries are difference-term classes of tau, stored by
// their exact value at the witness. The concrete operations apply
// unchanged; interpretation happens at instantiation and display time.
struct ParametricDBM {
  NType tau;
  DBM m;
};

// Entry (i,j) = (<=, class of r_i - r_j); equals dbm_of_valuation of the
// witness as a matrix.
ParametricDBM build_M_tau(const NType& tau);

// Maps each entry through its class to the valuation; requires
// type_of(nu) == tau and every finite entry to lie on a class.
DBM instantiate(const ParametricDBM& pd, const std::vector<Rat>& nu);

// Matrix with entries rendered as class representatives when possible.
std::string pdbm_str(const ParametricDBM& pd);

}  // namespace tarel
