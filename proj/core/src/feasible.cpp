#include "tarel/feasible.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace tarel {

namespace {

// Row: sum coeff[k] * x_k  <=  rhs   (strict when s is set).
struct Row {
  std::vector<Rat> coeff;
  Rat rhs;
  bool strict = false;
};

// Keeps the tighter of two rows with identical coefficient vectors.
void add_row(std::map<std::vector<Rat>, std::pair<Rat, bool>>& pool, Row r) {
  auto it = pool.find(r.coeff);
  if (it == pool.end()) {
    pool.emplace(std::move(r.coeff), std::make_pair(r.rhs, r.strict));
    return;
  }
  auto& [rhs, strict] = it->second;
  if (r.rhs < rhs || (r.rhs == rhs && r.strict && !strict)) {
    rhs = r.rhs;
    strict = r.strict;
  }
}

}  // namespace

FeasResult feasible(int n, const std::vector<LinConstraint>& constraints) {
  if (n < 0) throw std::invalid_argument("feasible: negative dimension");

  std::vector<Row> rows;
  auto push = [&](std::vector<Rat> c, Rat b, bool strict) {
    rows.push_back(Row{std::move(c), b, strict});
  };

  for (const auto& con : constraints) {
    if (static_cast<int>(con.coeff.size()) != n)
      throw std::invalid_argument("feasible: constraint arity mismatch");
    std::vector<Rat> c(con.coeff.begin(), con.coeff.end());
    std::vector<Rat> neg(n);
    for (int k = 0; k < n; ++k) neg[k] = -c[k];
    switch (con.rel) {
      case RelOp::lt:
        push(std::move(c), con.rhs, true);
        break;
      case RelOp::eq:
        push(std::move(c), con.rhs, false);
        push(std::move(neg), -con.rhs, false);
        break;
      case RelOp::gt:
        push(std::move(neg), -con.rhs, true);
        break;
    }
  }
  for (int k = 0; k < n; ++k) {
    std::vector<Rat> lo(n), hi(n);
    lo[k] = Rat(-1);
    hi[k] = Rat(1);
    push(std::move(lo), Rat(0), false);  // x_k >= 0
    push(std::move(hi), Rat(1), false);  // x_k <= 1
  }

  // Eliminate x_{n-1} down to x_0; steps[p] keeps the rows mentioning x_p,
  // normalized so its coefficient is +1 (upper) or -1 (lower).
  std::vector<std::vector<Row>> steps(n);
  for (int p = n - 1; p >= 0; --p) {
    std::map<std::vector<Rat>, std::pair<Rat, bool>> next;
    std::vector<Row> uppers, lowers;
    for (auto& r : rows) {
      const Rat c = r.coeff[p];
      if (c.sign() == 0) {
        r.coeff.resize(p);
        add_row(next, std::move(r));
        continue;
      }
      const Rat scale = c.abs();
      for (auto& v : r.coeff) v = v / scale;
      r.rhs = r.rhs / scale;
      (c.sign() > 0 ? uppers : lowers).push_back(std::move(r));
    }
    for (const auto& lo : lowers)
      for (const auto& up : uppers) {
        Row sum;
        sum.coeff.resize(p);
        for (int k = 0; k < p; ++k) sum.coeff[k] = lo.coeff[k] + up.coeff[k];
        sum.rhs = lo.rhs + up.rhs;
        sum.strict = lo.strict || up.strict;
        add_row(next, std::move(sum));
      }
    auto& kept = steps[p];
    kept = std::move(uppers);
    kept.insert(kept.end(), std::make_move_iterator(lowers.begin()),
                std::make_move_iterator(lowers.end()));
    rows.clear();
    rows.reserve(next.size());
    for (auto& [c, rb] : next)
      rows.push_back(Row{c, rb.first, rb.second});
  }

  for (const auto& r : rows) {
    const int s = r.rhs.sign();
    if (s < 0 || (s == 0 && r.strict)) return {};
  }

  // Back-substitute x_0 upward, placing each variable at the midpoint of
  // its residual interval so strict rows stay strictly satisfied.
  FeasResult res;
  res.ok = true;
  res.witness.resize(n);
  for (int p = 0; p < n; ++p) {
    Rat lo(0), hi(1);
    for (const auto& r : steps[p]) {
      Rat rest = r.rhs;
      for (int k = 0; k < p; ++k) rest = rest - r.coeff[k] * res.witness[k];
      if (r.coeff[p].sign() > 0)
        hi = std::min(hi, rest);
      else
        lo = std::max(lo, -rest);
    }
    res.witness[p] = lo == hi ? lo : (lo + hi) / Rat(2);
  }
  return res;
}

}  // namespace tarel
