#include "tarel/solve.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tarel {

namespace {

bool has_quantifier(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      return true;
    case Formula::Kind::conj:
    case Formula::Kind::disj:
    case Formula::Kind::neg:
      for (const auto& k : f->kids)
        if (has_quantifier(k)) return true;
      return false;
    default:
      return false;
  }
}

enum class Tri { no, unknown, yes };

Tri tri_not(Tri t) {
  if (t == Tri::yes) return Tri::no;
  if (t == Tri::no) return Tri::yes;
  return Tri::unknown;
}

long long floor_div(__int128 a, long long b) {
  __int128 q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return (long long)q;
}

long long ceil_div(__int128 a, long long b) {
  __int128 q = a / b, r = a % b;
  if (r != 0 && ((r < 0) == (b < 0))) ++q;
  return (long long)q;
}

// One existential block: integer chain variables searched over [0, cap],
// pruned by bounds consistency on the linear atoms of the conjunctive
// skeleton and by three-valued evaluation of the whole body. Every positive
// answer is confirmed by exact evaluation.
struct BlockSolver {
  const Assignment& base;
  std::vector<std::string> vars;
  std::map<std::string, int> var_index;
  FormulaPtr body;
  long long cap;
  long long* budget;

  struct Row {
    std::vector<std::pair<int, long long>> terms;  // (var, coefficient)
    bool exact = false;                            // equality, else <=
    long long rhs = 0;
  };
  std::vector<Row> rows;
  bool feasible = true;

  std::vector<long long> lo, hi;

  BlockSolver(const Assignment& a, std::vector<std::string> vs, FormulaPtr b,
              long long c, long long* bud)
      : base(a), vars(std::move(vs)), body(std::move(b)), cap(c), budget(bud) {
    for (int i = 0; i < (int)vars.size(); ++i) var_index[vars[i]] = i;
    lo.assign(vars.size(), 0);
    hi.assign(vars.size(), cap);
    collect_rows(body);
  }

  Rat base_value(const std::string& name) const {
    auto ri = base.real_vals.find(name);
    if (ri != base.real_vals.end()) return ri->second;
    auto ii = base.int_vals.find(name);
    if (ii != base.int_vals.end()) return Rat(ii->second);
    throw std::invalid_argument("unbound variable " + name);
  }

  void add_cmp_row(const FormulaPtr& f) {
    LinearTerm lt = linearize(t_sub(f->lhs, f->rhs));
    Row row;
    Rat c0 = lt.constant;
    for (const auto& [name, coeff] : lt.coeff) {
      auto it = var_index.find(name);
      if (it != var_index.end())
        row.terms.emplace_back(it->second, coeff);
      else
        c0 = c0 + base_value(name) * Rat(coeff);
    }
    Rat q = Rat(0) - c0;  // sum(terms) OP q
    if (row.terms.empty()) {
      bool ok = f->op == CmpOp::le   ? Rat(0) <= q
                : f->op == CmpOp::lt ? Rat(0) < q
                                     : Rat(0) == q;
      if (!ok) feasible = false;
      return;
    }
    switch (f->op) {
      case CmpOp::le:
        row.exact = false;
        row.rhs = q.floor();
        break;
      case CmpOp::lt:
        row.exact = false;
        row.rhs = q.is_integer() ? q.num() - 1 : q.floor();
        break;
      case CmpOp::eq:
        if (!q.is_integer()) {
          feasible = false;
          return;
        }
        row.exact = true;
        row.rhs = q.num();
        break;
    }
    rows.push_back(std::move(row));
  }

  void collect_rows(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::conj:
        for (const auto& k : f->kids) collect_rows(k);
        return;
      case Formula::Kind::falsum:
        feasible = false;
        return;
      case Formula::Kind::cmp:
        add_cmp_row(f);
        return;
      default:
        return;  // disjunctions, negations and mod atoms prune via tri_eval
    }
  }

  bool propagate() {
    for (int pass = 0; pass < 200; ++pass) {
      bool changed = false;
      for (const Row& row : rows) {
        __int128 smin = 0, smax = 0;
        for (const auto& [i, c] : row.terms) {
          if (c > 0) {
            smin += (__int128)c * lo[i];
            smax += (__int128)c * hi[i];
          } else {
            smin += (__int128)c * hi[i];
            smax += (__int128)c * lo[i];
          }
        }
        if (smin > row.rhs) return false;
        if (row.exact && smax < row.rhs) return false;
        for (const auto& [i, c] : row.terms) {
          __int128 rest_min = smin - (__int128)c * (c > 0 ? lo[i] : hi[i]);
          __int128 rest_max = smax - (__int128)c * (c > 0 ? hi[i] : lo[i]);
          if (c > 0) {
            long long nb = floor_div(row.rhs - rest_min, c);
            if (nb < hi[i]) hi[i] = nb, changed = true;
            if (row.exact) {
              long long lb = ceil_div(row.rhs - rest_max, c);
              if (lb > lo[i]) lo[i] = lb, changed = true;
            }
          } else {
            long long lb = ceil_div(row.rhs - rest_min, c);
            if (lb > lo[i]) lo[i] = lb, changed = true;
            if (row.exact) {
              long long nb = floor_div(row.rhs - rest_max, c);
              if (nb < hi[i]) hi[i] = nb, changed = true;
            }
          }
          if (lo[i] > hi[i]) return false;
        }
      }
      if (!changed) return true;
    }
    return true;
  }

  struct Iv {
    Rat lo, hi;
  };

  Iv term_iv(const TermPtr& t) const {
    switch (t->kind) {
      case Term::Kind::constant:
        return {t->value, t->value};
      case Term::Kind::variable: {
        auto it = var_index.find(t->var);
        if (it != var_index.end())
          return {Rat(lo[it->second]), Rat(hi[it->second])};
        Rat v = base_value(t->var);
        return {v, v};
      }
      case Term::Kind::add: {
        Iv acc = term_iv(t->args[0]);
        for (std::size_t i = 1; i < t->args.size(); ++i) {
          Iv k = term_iv(t->args[i]);
          acc.lo = acc.lo + k.lo;
          acc.hi = acc.hi + k.hi;
        }
        return acc;
      }
      case Term::Kind::sub: {
        if (t->args.size() == 1) {
          Iv k = term_iv(t->args[0]);
          return {Rat(0) - k.hi, Rat(0) - k.lo};
        }
        Iv acc = term_iv(t->args[0]);
        for (std::size_t i = 1; i < t->args.size(); ++i) {
          Iv k = term_iv(t->args[i]);
          acc.lo = acc.lo - k.hi;
          acc.hi = acc.hi - k.lo;
        }
        return acc;
      }
    }
    throw std::logic_error("unreachable term kind");
  }

  Tri tri_eval(const FormulaPtr& f) const {
    switch (f->kind) {
      case Formula::Kind::verum:
        return Tri::yes;
      case Formula::Kind::falsum:
        return Tri::no;
      case Formula::Kind::cmp: {
        Iv a = term_iv(f->lhs), b = term_iv(f->rhs);
        switch (f->op) {
          case CmpOp::le:
            if (a.hi <= b.lo) return Tri::yes;
            if (b.hi < a.lo) return Tri::no;
            return Tri::unknown;
          case CmpOp::lt:
            if (a.hi < b.lo) return Tri::yes;
            if (b.hi <= a.lo) return Tri::no;
            return Tri::unknown;
          case CmpOp::eq:
            if (a.lo == a.hi && b.lo == b.hi && a.lo == b.lo) return Tri::yes;
            if (a.hi < b.lo || b.hi < a.lo) return Tri::no;
            return Tri::unknown;
        }
        throw std::logic_error("unreachable cmp op");
      }
      case Formula::Kind::modeq: {
        Iv v = term_iv(f->mod_term);
        if (!(v.lo == v.hi) || !v.lo.is_integer()) return Tri::unknown;
        long long rem = (v.lo.num() - f->mod_c) % f->mod_d;
        return rem == 0 ? Tri::yes : Tri::no;
      }
      case Formula::Kind::conj: {
        Tri acc = Tri::yes;
        for (const auto& k : f->kids) {
          Tri t = tri_eval(k);
          if (t == Tri::no) return Tri::no;
          if (t == Tri::unknown) acc = Tri::unknown;
        }
        return acc;
      }
      case Formula::Kind::disj: {
        Tri acc = Tri::no;
        for (const auto& k : f->kids) {
          Tri t = tri_eval(k);
          if (t == Tri::yes) return Tri::yes;
          if (t == Tri::unknown) acc = Tri::unknown;
        }
        return acc;
      }
      case Formula::Kind::neg:
        return tri_not(tri_eval(f->kids[0]));
      default:
        return Tri::unknown;
    }
  }

  bool verify() const {
    Assignment full = base;
    for (std::size_t i = 0; i < vars.size(); ++i) full.set(vars[i], lo[i]);
    return eval(body, full);
  }

  bool search() {
    if (!propagate()) return false;
    Tri t = tri_eval(body);
    if (t == Tri::no) return false;
    int pick = -1;
    long long best = LLONG_MAX;
    for (int i = 0; i < (int)vars.size(); ++i)
      if (lo[i] < hi[i] && hi[i] - lo[i] < best) best = hi[i] - lo[i], pick = i;
    if (pick < 0) return verify();
    if (t == Tri::yes) {
      auto saved_hi = hi;
      hi = lo;
      bool ok = verify();
      hi = saved_hi;
      if (ok) return true;
    }
    auto saved_lo = lo, saved_hi = hi;
    for (long long v = saved_lo[pick]; v <= saved_hi[pick]; ++v) {
      if (--*budget < 0)
        throw std::runtime_error("bounded search budget exhausted");
      lo[pick] = hi[pick] = v;
      if (search()) return true;
      lo = saved_lo;
      hi = saved_hi;
    }
    return false;
  }

  bool solve() {
    if (!feasible) return false;
    return search();
  }
};

bool sat_rec(const FormulaPtr& f, const Assignment& a, long long cap,
             long long* budget) {
  switch (f->kind) {
    case Formula::Kind::verum:
      return true;
    case Formula::Kind::falsum:
      return false;
    case Formula::Kind::cmp:
    case Formula::Kind::modeq:
      return eval(f, a);
    case Formula::Kind::neg:
      if (has_quantifier(f->kids[0]))
        throw std::runtime_error("negation over a quantifier block");
      return eval(f, a);
    case Formula::Kind::conj: {
      for (const auto& k : f->kids)
        if (!has_quantifier(k) && !eval(k, a)) return false;
      for (const auto& k : f->kids)
        if (has_quantifier(k) && !sat_rec(k, a, cap, budget)) return false;
      return true;
    }
    case Formula::Kind::disj: {
      for (const auto& k : f->kids)
        if (!has_quantifier(k) && eval(k, a)) return true;
      for (const auto& k : f->kids)
        if (has_quantifier(k) && sat_rec(k, a, cap, budget)) return true;
      return false;
    }
    case Formula::Kind::forall:
      throw std::runtime_error("universal quantifier in bounded search");
    case Formula::Kind::exists: {
      std::vector<std::string> vars;
      FormulaPtr body = f;
      while (body->kind == Formula::Kind::exists) {
        if (sort_of_var(body->bound_var) != Sort::integer)
          throw std::runtime_error("real quantifier in bounded search");
        vars.push_back(body->bound_var);
        body = body->body;
      }
      if (has_quantifier(body))
        throw std::runtime_error("nested quantifier block in bounded search");
      BlockSolver solver(a, std::move(vars), body, cap, budget);
      return solver.solve();
    }
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

bool sat_int_exists_bounded(const FormulaPtr& f, const Assignment& a,
                            long long cap, long long node_budget) {
  if (cap < 0) throw std::invalid_argument("negative search cap");
  long long budget = node_budget;
  return sat_rec(f, a, cap, &budget);
}

}  // namespace tarel
