#include "tarel/formula.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tarel {

bool is_valid_var(const std::string& name) {
  if (name.size() < 2) return false;
  char f = name[0];
  if (f != 'r' && f != 's' && f != 'z' && f != 'w') return false;
  std::size_t i = 1, digits = 0;
  while (i < name.size() && std::isdigit((unsigned char)name[i])) ++i, ++digits;
  if (digits == 0) return false;
  if (i == name.size()) return true;
  return i + 1 == name.size() && name[i] == '\'';
}

Sort sort_of_var(const std::string& name) {
  if (!is_valid_var(name)) throw std::invalid_argument("unknown variable family: '" + name + "'");
  return (name[0] == 'r' || name[0] == 's') ? Sort::real : Sort::integer;
}

TermPtr t_const(const Rat& v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::constant;
  t->value = v;
  return t;
}
TermPtr t_const(std::int64_t v) { return t_const(Rat(v)); }

TermPtr t_var(const std::string& name) {
  sort_of_var(name);  // validates
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::variable;
  t->var = name;
  return t;
}

TermPtr t_add(std::vector<TermPtr> args) {
  if (args.empty()) throw std::invalid_argument("empty sum");
  if (args.size() == 1) return args[0];
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::add;
  t->args = std::move(args);
  return t;
}

TermPtr t_sub(std::vector<TermPtr> args) {
  if (args.empty()) throw std::invalid_argument("empty difference");
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::sub;
  t->args = std::move(args);
  return t;
}

TermPtr t_add(const TermPtr& a, const TermPtr& b) { return t_add(std::vector<TermPtr>{a, b}); }
TermPtr t_sub(const TermPtr& a, const TermPtr& b) { return t_sub(std::vector<TermPtr>{a, b}); }

static void linearize_into(const TermPtr& t, std::int64_t scale, LinearTerm& out) {
  switch (t->kind) {
    case Term::Kind::constant:
      out.constant += Rat(scale) * t->value;
      return;
    case Term::Kind::variable: {
      auto [it, fresh] = out.coeff.emplace(t->var, 0);
      (void)fresh;
      it->second += scale;
      if (it->second == 0) out.coeff.erase(it);
      return;
    }
    case Term::Kind::add:
      for (const auto& a : t->args) linearize_into(a, scale, out);
      return;
    case Term::Kind::sub:
      if (t->args.size() == 1) {
        linearize_into(t->args[0], -scale, out);
      } else {
        linearize_into(t->args[0], scale, out);
        for (std::size_t i = 1; i < t->args.size(); ++i) linearize_into(t->args[i], -scale, out);
      }
      return;
  }
  throw std::logic_error("unreachable term kind");
}

LinearTerm linearize(const TermPtr& t) {
  LinearTerm lt;
  linearize_into(t, 1, lt);
  return lt;
}

static FormulaPtr mk(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr f_true() { return mk(Formula::Kind::verum); }
FormulaPtr f_false() { return mk(Formula::Kind::falsum); }

FormulaPtr f_cmp(CmpOp op, const TermPtr& lhs, const TermPtr& rhs) {
  auto f = mk(Formula::Kind::cmp);
  auto m = std::const_pointer_cast<Formula>(f);
  m->op = op;
  m->lhs = lhs;
  m->rhs = rhs;
  return f;
}
FormulaPtr f_le(const TermPtr& a, const TermPtr& b) { return f_cmp(CmpOp::le, a, b); }
FormulaPtr f_lt(const TermPtr& a, const TermPtr& b) { return f_cmp(CmpOp::lt, a, b); }
FormulaPtr f_eq(const TermPtr& a, const TermPtr& b) { return f_cmp(CmpOp::eq, a, b); }

FormulaPtr f_modeq(const TermPtr& t, std::int64_t c, std::int64_t d) {
  if (d <= 0) throw std::invalid_argument("mod atom needs positive modulus");
  auto f = mk(Formula::Kind::modeq);
  auto m = std::const_pointer_cast<Formula>(f);
  m->mod_term = t;
  m->mod_c = c;
  m->mod_d = d;
  return f;
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> flat;
  for (auto& k : kids) {
    if (k->kind == Formula::Kind::verum) continue;
    if (k->kind == Formula::Kind::falsum) return f_false();
    if (k->kind == Formula::Kind::conj) {
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (flat.empty()) return f_true();
  if (flat.size() == 1) return flat[0];
  auto f = mk(Formula::Kind::conj);
  std::const_pointer_cast<Formula>(f)->kids = std::move(flat);
  return f;
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> flat;
  for (auto& k : kids) {
    if (k->kind == Formula::Kind::falsum) continue;
    if (k->kind == Formula::Kind::verum) return f_true();
    if (k->kind == Formula::Kind::disj) {
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (flat.empty()) return f_false();
  if (flat.size() == 1) return flat[0];
  auto f = mk(Formula::Kind::disj);
  std::const_pointer_cast<Formula>(f)->kids = std::move(flat);
  return f;
}

FormulaPtr f_not(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::verum) return f_false();
  if (f->kind == Formula::Kind::falsum) return f_true();
  if (f->kind == Formula::Kind::neg) return f->kids[0];
  auto g = mk(Formula::Kind::neg);
  std::const_pointer_cast<Formula>(g)->kids = {f};
  return g;
}

static FormulaPtr f_quant(Formula::Kind k, const std::string& var, const FormulaPtr& body) {
  sort_of_var(var);  // validates family
  auto f = mk(k);
  auto m = std::const_pointer_cast<Formula>(f);
  m->bound_var = var;
  m->body = body;
  return f;
}
FormulaPtr f_exists(const std::string& var, const FormulaPtr& body) {
  return f_quant(Formula::Kind::exists, var, body);
}
FormulaPtr f_forall(const std::string& var, const FormulaPtr& body) {
  return f_quant(Formula::Kind::forall, var, body);
}

TermSort term_sort(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::constant:
      return {};
    case Term::Kind::variable:
      return {true, sort_of_var(t->var)};
    case Term::Kind::add:
    case Term::Kind::sub: {
      TermSort acc;
      for (const auto& a : t->args) {
        TermSort s = term_sort(a);
        if (!s.has_var) continue;
        if (acc.has_var && acc.sort != s.sort)
          throw std::invalid_argument("term mixes real and integer variables");
        acc = s;
      }
      return acc;
    }
  }
  throw std::logic_error("unreachable term kind");
}

static void check_integral_constants(const TermPtr& t) {
  LinearTerm lt = linearize(t);
  if (!lt.constant.is_integer())
    throw std::invalid_argument("integer-sort term has fractional constant");
}

void check_sorts(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::verum:
    case Formula::Kind::falsum:
      return;
    case Formula::Kind::cmp: {
      TermSort a = term_sort(f->lhs), b = term_sort(f->rhs);
      if (a.has_var && b.has_var && a.sort != b.sort)
        throw std::invalid_argument("atom mixes sorts: " + serialize(f));
      Sort s = a.has_var ? a.sort : b.has_var ? b.sort : Sort::real;
      if (s == Sort::integer) {
        check_integral_constants(f->lhs);
        check_integral_constants(f->rhs);
      }
      return;
    }
    case Formula::Kind::modeq: {
      TermSort s = term_sort(f->mod_term);
      if (s.has_var && s.sort != Sort::integer)
        throw std::invalid_argument("mod atom over real term: " + serialize(f));
      check_integral_constants(f->mod_term);
      return;
    }
    case Formula::Kind::conj:
    case Formula::Kind::disj:
    case Formula::Kind::neg:
      for (const auto& k : f->kids) check_sorts(k);
      return;
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      check_sorts(f->body);
      return;
  }
  throw std::logic_error("unreachable formula kind");
}

void Assignment::set(const std::string& var, const Rat& v) {
  if (sort_of_var(var) != Sort::real)
    throw std::invalid_argument("rational value for integer variable " + var);
  real_vals[var] = v;
}
void Assignment::set(const std::string& var, std::int64_t v) {
  if (sort_of_var(var) != Sort::integer)
    throw std::invalid_argument("integer value for real variable " + var);
  int_vals[var] = v;
}
bool Assignment::has(const std::string& var) const {
  return real_vals.count(var) || int_vals.count(var);
}

Rat eval_term(const TermPtr& t, const Assignment& a) {
  switch (t->kind) {
    case Term::Kind::constant:
      return t->value;
    case Term::Kind::variable: {
      auto ir = a.real_vals.find(t->var);
      if (ir != a.real_vals.end()) return ir->second;
      auto iz = a.int_vals.find(t->var);
      if (iz != a.int_vals.end()) return Rat(iz->second);
      throw std::invalid_argument("unbound variable " + t->var);
    }
    case Term::Kind::add: {
      Rat s(0);
      for (const auto& x : t->args) s += eval_term(x, a);
      return s;
    }
    case Term::Kind::sub: {
      if (t->args.size() == 1) return -eval_term(t->args[0], a);
      Rat s = eval_term(t->args[0], a);
      for (std::size_t i = 1; i < t->args.size(); ++i) s -= eval_term(t->args[i], a);
      return s;
    }
  }
  throw std::logic_error("unreachable term kind");
}

bool eval(const FormulaPtr& f, const Assignment& a) {
  switch (f->kind) {
    case Formula::Kind::verum:
      return true;
    case Formula::Kind::falsum:
      return false;
    case Formula::Kind::cmp: {
      Rat l = eval_term(f->lhs, a), r = eval_term(f->rhs, a);
      switch (f->op) {
        case CmpOp::le: return l <= r;
        case CmpOp::lt: return l < r;
        case CmpOp::eq: return l == r;
      }
      throw std::logic_error("unreachable cmp op");
    }
    case Formula::Kind::modeq: {
      Rat v = eval_term(f->mod_term, a);
      if (!v.is_integer()) throw std::invalid_argument("mod atom evaluated at non-integer");
      std::int64_t rem = (v.num() - f->mod_c) % f->mod_d;
      return rem == 0;
    }
    case Formula::Kind::conj:
      for (const auto& k : f->kids)
        if (!eval(k, a)) return false;
      return true;
    case Formula::Kind::disj:
      for (const auto& k : f->kids)
        if (eval(k, a)) return true;
      return false;
    case Formula::Kind::neg:
      return !eval(f->kids[0], a);
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      throw std::invalid_argument("eval over quantified formula");
  }
  throw std::logic_error("unreachable formula kind");
}

static void term_vars(const TermPtr& t, std::map<std::string, Sort>& out) {
  switch (t->kind) {
    case Term::Kind::constant:
      return;
    case Term::Kind::variable:
      out.emplace(t->var, sort_of_var(t->var));
      return;
    case Term::Kind::add:
    case Term::Kind::sub:
      for (const auto& a : t->args) term_vars(a, out);
      return;
  }
}

void free_vars(const FormulaPtr& f, std::map<std::string, Sort>& out) {
  switch (f->kind) {
    case Formula::Kind::verum:
    case Formula::Kind::falsum:
      return;
    case Formula::Kind::cmp:
      term_vars(f->lhs, out);
      term_vars(f->rhs, out);
      return;
    case Formula::Kind::modeq:
      term_vars(f->mod_term, out);
      return;
    case Formula::Kind::conj:
    case Formula::Kind::disj:
    case Formula::Kind::neg:
      for (const auto& k : f->kids) free_vars(k, out);
      return;
    case Formula::Kind::exists:
    case Formula::Kind::forall: {
      std::map<std::string, Sort> inner;
      free_vars(f->body, inner);
      inner.erase(f->bound_var);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

TermPtr substitute(const TermPtr& t, const std::string& var, const Rat& value) {
  switch (t->kind) {
    case Term::Kind::constant:
      return t;
    case Term::Kind::variable:
      return t->var == var ? t_const(value) : t;
    case Term::Kind::add:
    case Term::Kind::sub: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        args.push_back(substitute(a, var, value));
        changed |= args.back() != a;
      }
      if (!changed) return t;
      auto n = std::make_shared<Term>(*t);
      n->args = std::move(args);
      return n;
    }
  }
  throw std::logic_error("unreachable term kind");
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Rat& value) {
  switch (f->kind) {
    case Formula::Kind::verum:
    case Formula::Kind::falsum:
      return f;
    case Formula::Kind::cmp:
      return f_cmp(f->op, substitute(f->lhs, var, value), substitute(f->rhs, var, value));
    case Formula::Kind::modeq:
      return f_modeq(substitute(f->mod_term, var, value), f->mod_c, f->mod_d);
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto& k : f->kids) kids.push_back(substitute(k, var, value));
      return f->kind == Formula::Kind::conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case Formula::Kind::neg:
      return f_not(substitute(f->kids[0], var, value));
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      if (f->bound_var == var) return f;  // shadowed; substituted values are closed
      {
        auto g = std::make_shared<Formula>(*f);
        g->body = substitute(f->body, var, value);
        return g;
      }
  }
  throw std::logic_error("unreachable formula kind");
}

namespace {

// A linear integer term fits the restricted fragment when it is a single
// variable with coefficient 1, or a difference of two variables.
bool lstar_diff_shape(const LinearTerm& lt, bool allow_negated_single) {
  if (lt.coeff.size() == 2) {
    auto it = lt.coeff.begin();
    std::int64_t c1 = it->second;
    std::int64_t c2 = std::next(it)->second;
    return (c1 == 1 && c2 == -1) || (c1 == -1 && c2 == 1);
  }
  if (lt.coeff.size() == 1) {
    std::int64_t c = lt.coeff.begin()->second;
    return c == 1 || (allow_negated_single && c == -1);
  }
  return lt.coeff.empty();  // ground atoms are harmless
}

bool lstar_atom(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::modeq) {
    LinearTerm lt = linearize(f->mod_term);
    return lstar_diff_shape(lt, true);
  }
  TermSort a = term_sort(f->lhs), b = term_sort(f->rhs);
  Sort s = a.has_var ? a.sort : b.has_var ? b.sort : Sort::real;
  if (s == Sort::real) return true;
  LinearTerm lt = linearize(t_sub(f->lhs, f->rhs));
  // z - z' <= c and z <= c, plus the mirrored forms that arise from writing
  // the same constraints as c <= z etc.; equality needs the shape both ways.
  return lstar_diff_shape(lt, true);
}

}  // namespace

bool is_Lstar(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::verum:
    case Formula::Kind::falsum:
      return true;
    case Formula::Kind::cmp:
    case Formula::Kind::modeq:
      return lstar_atom(f);
    case Formula::Kind::conj:
    case Formula::Kind::disj:
    case Formula::Kind::neg:
      for (const auto& k : f->kids)
        if (!is_Lstar(k)) return false;
      return true;
    case Formula::Kind::exists:
    case Formula::Kind::forall:
      return is_Lstar(f->body);
  }
  throw std::logic_error("unreachable formula kind");
}

std::string serialize(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::constant:
      return t->value.str();
    case Term::Kind::variable:
      return t->var;
    case Term::Kind::add:
    case Term::Kind::sub: {
      std::string s = t->kind == Term::Kind::add ? "(+" : "(-";
      for (const auto& a : t->args) {
        s += ' ';
        s += serialize(a);
      }
      s += ')';
      return s;
    }
  }
  throw std::logic_error("unreachable term kind");
}

std::string serialize(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::verum:
      return "(true)";
    case Formula::Kind::falsum:
      return "(false)";
    case Formula::Kind::cmp: {
      const char* op = f->op == CmpOp::le ? "<=" : f->op == CmpOp::lt ? "<" : "=";
      return std::string("(") + op + " " + serialize(f->lhs) + " " + serialize(f->rhs) + ")";
    }
    case Formula::Kind::modeq:
      return "(mod= " + serialize(f->mod_term) + " " + std::to_string(f->mod_c) + " " +
             std::to_string(f->mod_d) + ")";
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
      std::string s = f->kind == Formula::Kind::conj ? "(and" : "(or";
      for (const auto& k : f->kids) {
        s += ' ';
        s += serialize(k);
      }
      s += ')';
      return s;
    }
    case Formula::Kind::neg:
      return "(not " + serialize(f->kids[0]) + ")";
    case Formula::Kind::exists:
    case Formula::Kind::forall: {
      bool ex = f->kind == Formula::Kind::exists;
      bool real = sort_of_var(f->bound_var) == Sort::real;
      std::string head = ex ? (real ? "exists-r" : "exists-z") : (real ? "forall-r" : "forall-z");
      return "(" + head + " " + f->bound_var + " " + serialize(f->body) + ")";
    }
  }
  throw std::logic_error("unreachable formula kind");
}

namespace {

struct SexprParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit SexprParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("formula parse error at offset " + std::to_string(pos) + ": " + why);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string atom() {
    skip_ws();
    std::size_t b = pos;
    while (pos < text.size() && !std::isspace((unsigned char)text[pos]) && text[pos] != '(' &&
           text[pos] != ')')
      ++pos;
    if (b == pos) fail("expected an atom");
    return text.substr(b, pos - b);
  }

  std::int64_t integer() {
    std::string a = atom();
    try {
      Rat r = Rat::parse(a);
      if (!r.is_integer()) fail("expected an integer, got '" + a + "'");
      return r.num();
    } catch (const std::invalid_argument&) {
      fail("expected an integer, got '" + a + "'");
    }
  }

  TermPtr term() {
    if (peek() != '(') {
      std::string a = atom();
      if (is_valid_var(a)) return t_var(a);
      try {
        return t_const(Rat::parse(a));
      } catch (const std::invalid_argument&) {
        fail("'" + a + "' is neither a variable nor a rational");
      }
    }
    expect('(');
    std::string head = atom();
    std::vector<TermPtr> args;
    while (peek() != ')') args.push_back(term());
    expect(')');
    if (args.empty()) fail("empty operand list for '" + head + "'");
    if (head == "+") return t_add(std::move(args));
    if (head == "-") return t_sub(std::move(args));
    fail("unknown term head '" + head + "'");
  }

  FormulaPtr formula() {
    expect('(');
    std::string head = atom();
    FormulaPtr out;
    if (head == "true" || head == "false") {
      out = head == "true" ? f_true() : f_false();
    } else if (head == "<=" || head == "<" || head == "=") {
      TermPtr a = term(), b = term();
      CmpOp op = head == "<=" ? CmpOp::le : head == "<" ? CmpOp::lt : CmpOp::eq;
      out = f_cmp(op, a, b);
    } else if (head == "mod=") {
      TermPtr t = term();
      std::int64_t c = integer();
      std::int64_t d = integer();
      if (d <= 0) fail("modulus must be positive");
      out = f_modeq(t, c, d);
    } else if (head == "and" || head == "or") {
      std::vector<FormulaPtr> kids;
      while (peek() != ')') kids.push_back(formula());
      out = head == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
    } else if (head == "not") {
      out = f_not(formula());
    } else if (head == "exists-r" || head == "exists-z" || head == "forall-r" ||
               head == "forall-z") {
      std::string v = atom();
      if (!is_valid_var(v)) fail("bad bound variable '" + v + "'");
      bool real = head.back() == 'r';
      if ((sort_of_var(v) == Sort::real) != real) fail("variable '" + v + "' has the wrong sort");
      FormulaPtr body = formula();
      out = head[0] == 'e' ? f_exists(v, body) : f_forall(v, body);
    } else {
      fail("unknown form '" + head + "'");
    }
    expect(')');
    return out;
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  SexprParser p(text);
  FormulaPtr f = p.formula();
  if (!p.at_end()) p.fail("trailing input");
  check_sorts(f);
  return f;
}

namespace {

void count_term(const TermPtr& t, std::set<const void*>& seen,
                long long& total) {
  if (!t || !seen.insert(t.get()).second) return;
  ++total;
  for (const TermPtr& a : t->args) count_term(a, seen, total);
}

void count_formula(const FormulaPtr& f, std::set<const void*>& seen,
                   long long& total) {
  if (!f || !seen.insert(f.get()).second) return;
  ++total;
  count_term(f->lhs, seen, total);
  count_term(f->rhs, seen, total);
  count_term(f->mod_term, seen, total);
  for (const FormulaPtr& k : f->kids) count_formula(k, seen, total);
  count_formula(f->body, seen, total);
}

}  // namespace

long long formula_node_count(const FormulaPtr& f) {
  std::set<const void*> seen;
  long long total = 0;
  count_formula(f, seen, total);
  return total;
}

}  // namespace tarel
