#pragma once

#include "tarel/formula.hpp"

namespace tarel {

// Decides a formula whose quantifiers are existential integer blocks, at a
// point: free variables are read from a, each exists-z chain is solved over
// [0, cap] per bound variable by interval propagation plus backtracking
// search, and candidate solutions are verified by exact evaluation. Real or
// universal quantifiers, negation over a quantifier, and a quantifier block
// nested under another all raise std::runtime_error; exhausting the node
// budget raises instead of returning a wrong answer.
bool sat_int_exists_bounded(const FormulaPtr& f, const Assignment& a,
                            long long cap, long long node_budget = 2000000);

}  // namespace tarel
