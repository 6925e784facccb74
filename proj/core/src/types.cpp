#include "tarel/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "tarel/feasible.hpp"

namespace tarel {

bool operator==(const DiffTerm& a, const DiffTerm& b) {
  return a.c == b.c && a.i == b.i && a.j == b.j;
}

bool operator<(const DiffTerm& a, const DiffTerm& b) {
  if (a.c != b.c) return a.c < b.c;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

std::string term_str(const DiffTerm& t) {
  std::string s;
  if (t.c != 0 || (t.i == 0 && t.j == 0)) s = std::to_string(t.c);
  if (t.i > 0) {
    if (!s.empty()) s += "+";
    s += "r" + std::to_string(t.i);
  }
  if (t.j > 0) s += "-r" + std::to_string(t.j);
  return s;
}

Rat term_value(const DiffTerm& t, const std::vector<Rat>& nu) {
  auto val = [&](int k) { return k == 0 ? Rat(0) : nu[k - 1]; };
  return Rat(t.c) + val(t.i) - val(t.j);
}

std::vector<DiffTerm> all_diff_terms(int n) {
  std::vector<DiffTerm> out;
  for (int c = -1; c <= 1; ++c) {
    out.push_back({c, 0, 0});
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        if (i != j) out.push_back({c, i, j});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const NType& a, const NType& b) {
  return a.n == b.n && a.chain == b.chain;
}
bool operator!=(const NType& a, const NType& b) { return !(a == b); }

int type_compare(const NType& tau, const DiffTerm& t1, const DiffTerm& t2) {
  const Rat v1 = term_value(t1, tau.witness);
  const Rat v2 = term_value(t2, tau.witness);
  if (v1 < v2) return -1;
  return v1 == v2 ? 0 : 1;
}

int class_index(const NType& tau, const Rat& v) {
  for (size_t k = 0; k < tau.class_value.size(); ++k)
    if (tau.class_value[k] == v) return static_cast<int>(k);
  return -1;
}

std::string type_str(const NType& tau) {
  std::ostringstream os;
  for (size_t k = 0; k < tau.chain.size(); ++k) {
    if (k) os << " < ";
    for (size_t t = 0; t < tau.chain[k].size(); ++t) {
      if (t) os << "=";
      os << term_str(tau.chain[k][t]);
    }
  }
  os << " @ (";
  for (size_t k = 0; k < tau.witness.size(); ++k) {
    if (k) os << ", ";
    os << tau.witness[k].str();
  }
  os << ")";
  return os.str();
}

NType type_of(const std::vector<Rat>& nu) {
  const int n = static_cast<int>(nu.size());
  if (n < 1) throw std::invalid_argument("type_of: empty valuation");
  for (const auto& v : nu)
    if (v < Rat(0) || Rat(1) < v)
      throw std::invalid_argument("type_of: coordinate outside [0,1]");
  auto terms = all_diff_terms(n);
  std::vector<std::pair<Rat, DiffTerm>> vals;
  vals.reserve(terms.size());
  for (const auto& t : terms) vals.emplace_back(term_value(t, nu), t);
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second < b.second;
            });
  NType tau;
  tau.n = n;
  tau.witness = nu;
  for (const auto& [v, t] : vals) {
    if (tau.chain.empty() || tau.class_value.back() != v) {
      tau.chain.push_back({t});
      tau.class_value.push_back(v);
    } else {
      tau.chain.back().push_back(t);
    }
  }
  return tau;
}

namespace {

LinConstraint order_constraint(int n, const DiffTerm& a, const DiffTerm& b,
                               RelOp rel) {
  std::vector<std::int64_t> co(n, 0);
  if (a.i) co[a.i - 1] += 1;
  if (a.j) co[a.j - 1] -= 1;
  if (b.i) co[b.i - 1] -= 1;
  if (b.j) co[b.j - 1] += 1;
  return LinConstraint{std::move(co), rel, Rat(b.c - a.c)};
}

using Chain = std::vector<std::vector<DiffTerm>>;

std::vector<LinConstraint> chain_constraints(int n, const Chain& chain) {
  std::vector<LinConstraint> cons;
  for (size_t k = 0; k + 1 < chain.size(); ++k)
    cons.push_back(
        order_constraint(n, chain[k].front(), chain[k + 1].front(), RelOp::lt));
  for (const auto& cls : chain)
    for (size_t t = 1; t < cls.size(); ++t)
      cons.push_back(order_constraint(n, cls[t], cls.front(), RelOp::eq));
  return cons;
}

struct EnumCtx {
  int n;
  std::vector<DiffTerm> terms;
  const std::function<bool(const NType&)>* yield;
  bool stopped = false;
};

void insert_sorted(std::vector<DiffTerm>& cls, const DiffTerm& t) {
  cls.insert(std::upper_bound(cls.begin(), cls.end(), t), t);
}

void enum_rec(EnumCtx& ctx, const Chain& chain,
              const std::vector<Rat>& witness, size_t idx) {
  if (ctx.stopped) return;
  if (idx == ctx.terms.size()) {
    NType tau;
    tau.n = ctx.n;
    tau.chain = chain;
    tau.witness = witness;
    for (const auto& cls : chain)
      tau.class_value.push_back(term_value(cls.front(), witness));
    if (!(*ctx.yield)(tau)) ctx.stopped = true;
    return;
  }
  const DiffTerm& t = ctx.terms[idx];
  const Rat tv = term_value(t, witness);
  const size_t m = chain.size();
  std::vector<Rat> cv(m);
  for (size_t k = 0; k < m; ++k) cv[k] = term_value(chain[k].front(), witness);

  // The current witness certifies exactly one position for free.
  size_t certified = 2 * m;
  for (size_t k = 0; k < m; ++k) {
    if (tv == cv[k]) {
      certified = 2 * k + 1;
      break;
    }
    if (tv < cv[k]) {
      certified = 2 * k;
      break;
    }
  }

  for (size_t pos = 0; pos <= 2 * m && !ctx.stopped; ++pos) {
    Chain next = chain;
    if (pos % 2 == 0) {
      next.insert(next.begin() + pos / 2, {t});
    } else {
      insert_sorted(next[pos / 2], t);
    }
    if (pos == certified) {
      enum_rec(ctx, next, witness, idx + 1);
      continue;
    }
    auto r = feasible(ctx.n, chain_constraints(ctx.n, next));
    if (r.ok) enum_rec(ctx, next, r.witness, idx + 1);
  }
}

}  // namespace

void enumerate_types(int n, const std::function<bool(const NType&)>& yield) {
  if (n < 1) throw std::invalid_argument("enumerate_types: bad dimension");
  EnumCtx ctx{n, all_diff_terms(n), &yield, false};
  Chain chain;
  std::vector<Rat> witness(n, Rat(1, 2));
  // Seed with a feasible witness for the empty chain; any cube point works.
  enum_rec(ctx, chain, witness, 0);
}

std::vector<NType> enumerate_types(int n) {
  std::vector<NType> out;
  enumerate_types(n, [&](const NType& tau) {
    out.push_back(tau);
    return true;
  });
  return out;
}

ParametricDBM build_M_tau(const NType& tau) {
  return ParametricDBM{tau, dbm_of_valuation(tau.witness)};
}

DBM instantiate(const ParametricDBM& pd, const std::vector<Rat>& nu) {
  if (type_of(nu) != pd.tau)
    throw std::invalid_argument("instantiate: valuation type mismatch");
  DBM out(pd.m.n);
  for (int i = 0; i <= pd.m.n; ++i)
    for (int j = 0; j <= pd.m.n; ++j) {
      const Bound& b = pd.m.at(i, j);
      if (b.inf) {
        out.at(i, j) = bound_inf();
        continue;
      }
      const int k = class_index(pd.tau, b.v);
      if (k < 0)
        throw std::logic_error("instantiate: entry value lies on no class");
      out.at(i, j) = Bound{b.s, false,
                           term_value(pd.tau.chain[k].front(), nu)};
    }
  out.canonical = pd.m.canonical;
  return out;
}

std::string pdbm_str(const ParametricDBM& pd) {
  std::ostringstream os;
  for (int i = 0; i <= pd.m.n; ++i) {
    for (int j = 0; j <= pd.m.n; ++j) {
      if (j) os << ' ';
      const Bound& b = pd.m.at(i, j);
      os << '(' << (b.s == Strictness::strict ? "<" : "<=") << ", ";
      if (b.inf) {
        os << "inf";
      } else {
        const int k = class_index(pd.tau, b.v);
        os << (k >= 0 ? term_str(pd.tau.chain[k].front()) : b.v.str());
      }
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tarel
