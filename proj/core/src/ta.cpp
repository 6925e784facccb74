#include <tarel/ta.hpp>

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tarel {

bool operator==(const GuardAtom& a, const GuardAtom& b) {
  return a.clock == b.clock && a.rel == b.rel && a.k == b.k;
}

TaParseError::TaParseError(int line_, int column_, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

namespace {

struct LineScanner {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  LineScanner(const std::string& s_, int line_) : s(s_), line(line_) {}

  int col() const { return static_cast<int>(pos) + 1; }
  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  void skip_ws() {
    while (!eof() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw TaParseError(line, col(), msg); }

  // Next run of non-space characters.
  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (!eof() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    return s.substr(start, pos - start);
  }

  void expect_word(const std::string& w) {
    skip_ws();
    int c = col();
    std::string got = word();
    if (got != w) throw TaParseError(line, c, "expected '" + w + "'");
  }

  void expect_end(const std::string& what) {
    skip_ws();
    if (!eof()) fail("unexpected trailing text after " + what);
  }
};

long long parse_nat(LineScanner& sc) {
  sc.skip_ws();
  if (sc.eof() || !std::isdigit(static_cast<unsigned char>(sc.peek()))) sc.fail("expected a natural number");
  long long v = 0;
  while (!sc.eof() && std::isdigit(static_cast<unsigned char>(sc.peek()))) {
    v = v * 10 + (sc.peek() - '0');
    if (v > 1000000) sc.fail("guard constant too large");
    ++sc.pos;
  }
  return v;
}

// "x" followed by a 1-based index within range.
int parse_clock(LineScanner& sc, int clock_count) {
  sc.skip_ws();
  int c = sc.col();
  if (sc.eof() || sc.peek() != 'x') throw TaParseError(sc.line, c, "expected a clock xI");
  ++sc.pos;
  if (sc.eof() || !std::isdigit(static_cast<unsigned char>(sc.peek())))
    throw TaParseError(sc.line, c, "expected a clock index after 'x'");
  long long idx = 0;
  while (!sc.eof() && std::isdigit(static_cast<unsigned char>(sc.peek()))) {
    idx = idx * 10 + (sc.peek() - '0');
    if (idx > 1000000) throw TaParseError(sc.line, c, "clock index too large");
    ++sc.pos;
  }
  if (idx < 1 || idx > clock_count)
    throw TaParseError(sc.line, c, "unknown clock x" + std::to_string(idx));
  return static_cast<int>(idx);
}

// One guard atom starting at the scanner position. "true" contributes
// nothing. Diagonal shapes (a clock on both sides, or xI-xJ) are rejected
// here with an explicit message.
void parse_guard_atom(LineScanner& sc, int clock_count, Guard& out) {
  sc.skip_ws();
  int atom_col = sc.col();
  if (!sc.eof() && sc.s.compare(sc.pos, 4, "true") == 0) {
    sc.pos += 4;
    sc.skip_ws();
    if (!sc.eof() && sc.peek() != '&') sc.fail("unexpected text after 'true'");
    return;
  }
  if (!sc.eof() && std::isdigit(static_cast<unsigned char>(sc.peek()))) {
    // k < xI < k+1
    long long k = parse_nat(sc);
    sc.skip_ws();
    if (sc.eof() || sc.peek() != '<') sc.fail("expected '<' after the lower bound");
    ++sc.pos;
    int clock = parse_clock(sc, clock_count);
    sc.skip_ws();
    if (sc.eof() || sc.peek() != '<') sc.fail("expected '<' after the clock in a range atom");
    ++sc.pos;
    int hi_col = sc.col();
    long long hi = parse_nat(sc);
    if (hi != k + 1)
      throw TaParseError(sc.line, hi_col,
                         "range atom must have the form k<x<k+1, got upper bound " +
                             std::to_string(hi));
    out.push_back({clock, GuardRel::open_unit, k});
    return;
  }
  if (sc.eof() || sc.peek() != 'x')
    throw TaParseError(sc.line, atom_col, "expected a guard atom");
  int clock = parse_clock(sc, clock_count);
  sc.skip_ws();
  if (sc.eof()) sc.fail("expected a comparison operator");
  if (sc.peek() == '-') {
    throw TaParseError(sc.line, sc.col(),
                       "diagonal constraint (clock difference) not allowed");
  }
  GuardRel rel;
  if (sc.peek() == '<') {
    ++sc.pos;
    if (!sc.eof() && sc.peek() == '=') sc.fail("operator '<=' is not in the guard grammar");
    rel = GuardRel::lt;
  } else if (sc.peek() == '=') {
    ++sc.pos;
    rel = GuardRel::eq;
  } else if (sc.peek() == '>') {
    ++sc.pos;
    if (!sc.eof() && sc.peek() == '=') {
      ++sc.pos;
      rel = GuardRel::ge;
    } else {
      rel = GuardRel::gt;
    }
  } else {
    sc.fail("expected '<', '=', '>=' or '>'");
  }
  sc.skip_ws();
  if (!sc.eof() && sc.peek() == 'x') {
    throw TaParseError(sc.line, sc.col(), "diagonal constraint (clock on both sides) not allowed");
  }
  long long k = parse_nat(sc);
  out.push_back({clock, rel, k});
}

Guard parse_guard_text(const std::string& line, std::size_t begin, std::size_t end, int line_no,
                       int clock_count) {
  // Scan the quoted region in place so error columns refer to the file line.
  std::string window = line.substr(0, end);
  LineScanner sc(window, line_no);
  sc.pos = begin;
  Guard g;
  sc.skip_ws();
  if (sc.pos >= end) sc.fail("empty guard");
  while (true) {
    parse_guard_atom(sc, clock_count, g);
    sc.skip_ws();
    if (sc.pos >= end || sc.eof()) break;
    if (sc.peek() != '&') sc.fail("expected '&' between guard atoms");
    ++sc.pos;
  }
  return g;
}

long long atom_constant(const GuardAtom& a) {
  return (a.rel == GuardRel::open_unit || a.rel == GuardRel::gt) ? a.k + 1 : a.k;
}

int rel_rank(GuardRel r) { return static_cast<int>(r); }

void sort_guard(Guard& g) {
  std::sort(g.begin(), g.end(), [](const GuardAtom& a, const GuardAtom& b) {
    if (a.clock != b.clock) return a.clock < b.clock;
    if (a.rel != b.rel) return rel_rank(a.rel) < rel_rank(b.rel);
    return a.k < b.k;
  });
  g.erase(std::unique(g.begin(), g.end()), g.end());
}

std::string fresh_location(std::set<std::string>& used, int& counter) {
  while (true) {
    std::string name = "@s" + std::to_string(counter++);
    if (used.insert(name).second) return name;
  }
}

bool atom_sat(const GuardAtom& a, const Rat& v) {
  Rat k(a.k);
  switch (a.rel) {
    case GuardRel::lt:
      return v < k;
    case GuardRel::eq:
      return v == k;
    case GuardRel::open_unit:
      return k < v && v < Rat(a.k + 1);
    case GuardRel::ge:
      return v >= k;
    case GuardRel::gt:
      return v > k;
  }
  return false;
}

}  // namespace

TimedAutomaton parse_timed_automaton(const std::string& text) {
  TimedAutomaton ta;
  bool have_clocks = false;
  std::set<std::string> declared;

  std::vector<std::string> lines;
  {
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    lines.push_back(cur);
  }

  int line_no = 0;
  for (std::string raw : lines) {
    ++line_no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    LineScanner sc(raw, line_no);
    sc.skip_ws();
    if (sc.eof()) continue;

    int kw_col = sc.col();
    std::string kw = sc.word();
    if (kw == "clocks:") {
      if (have_clocks) throw TaParseError(line_no, kw_col, "duplicate clocks header");
      have_clocks = true;
      int count = 0;
      bool saw_any = false;
      while (true) {
        sc.skip_ws();
        if (sc.eof()) break;
        int c = sc.col();
        std::string tok = sc.word();
        if (tok == "ref") {
          sc.skip_ws();
          int rc = sc.col();
          std::string ref = sc.word();
          std::string next_name = "x" + std::to_string(count + 1);
          if (ref == "x" + std::to_string(count) && count >= 1) {
            // re-names the last declared clock as the reference
          } else if (ref == next_name) {
            ++count;  // declares one extra clock that is the reference
          } else {
            throw TaParseError(line_no, rc, "reference clock must be the last clock");
          }
          ta.has_reference = true;
          sc.expect_end("clocks header");
          break;
        }
        if (tok != "x" + std::to_string(count + 1))
          throw TaParseError(line_no, c,
                             "clock names must be x1, x2, ... in order, got '" + tok + "'");
        ++count;
        saw_any = true;
      }
      if (count == 0 && !saw_any) throw TaParseError(line_no, sc.col(), "no clocks declared");
      ta.clock_count = count;
      continue;
    }
    if (!have_clocks)
      throw TaParseError(line_no, kw_col, "clocks header must precede '" + kw + "'");
    if (kw == "location") {
      sc.skip_ws();
      int nc = sc.col();
      std::string name = sc.word();
      if (name.empty()) throw TaParseError(line_no, nc, "expected a location name");
      if (!declared.insert(name).second)
        throw TaParseError(line_no, nc, "duplicate location '" + name + "'");
      ta.locations.push_back(name);
      sc.skip_ws();
      if (!sc.eof()) {
        int bc = sc.col();
        if (sc.peek() != '[') throw TaParseError(line_no, bc, "expected '[' to open the label list");
        std::size_t close = raw.find(']', sc.pos);
        if (close == std::string::npos)
          throw TaParseError(line_no, bc, "unterminated label list");
        std::string inner = raw.substr(sc.pos + 1, close - sc.pos - 1);
        std::vector<std::string> props;
        std::string item;
        std::stringstream ss(inner);
        while (std::getline(ss, item, ',')) {
          std::size_t a = item.find_first_not_of(" \t");
          if (a == std::string::npos) continue;
          std::size_t b = item.find_last_not_of(" \t");
          props.push_back(item.substr(a, b - a + 1));
        }
        ta.labels[name] = props;
        sc.pos = close + 1;
        sc.expect_end("label list");
      }
      continue;
    }
    if (kw == "edge") {
      Edge e;
      sc.skip_ws();
      int c = sc.col();
      e.source = sc.word();
      if (e.source.empty()) throw TaParseError(line_no, c, "expected a source location");
      if (!declared.count(e.source))
        throw TaParseError(line_no, c, "undeclared location '" + e.source + "'");
      sc.expect_word("->");
      sc.skip_ws();
      c = sc.col();
      e.target = sc.word();
      if (e.target.empty()) throw TaParseError(line_no, c, "expected a target location");
      if (!declared.count(e.target))
        throw TaParseError(line_no, c, "undeclared location '" + e.target + "'");

      sc.skip_ws();
      if (!sc.eof()) {
        std::size_t save = sc.pos;
        std::string clause = sc.word();
        if (clause == "guard") {
          sc.skip_ws();
          if (sc.eof() || sc.peek() != '"')
            sc.fail("expected a quoted guard string");
          std::size_t open = sc.pos;
          std::size_t close = raw.find('"', open + 1);
          if (close == std::string::npos)
            throw TaParseError(line_no, static_cast<int>(open) + 1, "unterminated guard string");
          e.guard = parse_guard_text(raw, open + 1, close, line_no, ta.clock_count);
          sc.pos = close + 1;
        } else {
          sc.pos = save;
        }
      }
      sc.skip_ws();
      if (!sc.eof()) {
        int rc = sc.col();
        std::string clause = sc.word();
        if (clause != "reset")
          throw TaParseError(line_no, rc, "expected 'reset' or end of edge");
        std::string rest = raw.substr(sc.pos);
        std::string item;
        std::stringstream ss(rest);
        bool any = false;
        std::size_t consumed = sc.pos;
        while (std::getline(ss, item, ',')) {
          std::size_t a = item.find_first_not_of(" \t");
          if (a == std::string::npos)
            throw TaParseError(line_no, static_cast<int>(consumed) + 1, "expected a clock in the reset list");
          LineScanner cs(raw, line_no);
          cs.pos = consumed + a;
          int clk = parse_clock(cs, ta.clock_count);
          cs.skip_ws();
          if (cs.pos < raw.size() && raw[cs.pos] != ',')
            throw TaParseError(line_no, cs.col(), "unexpected text in the reset list");
          if (ta.has_reference && clk == ta.clock_count)
            throw TaParseError(line_no, static_cast<int>(consumed + a) + 1,
                               "reference clock x" + std::to_string(clk) + " must not be reset");
          if (std::find(e.resets.begin(), e.resets.end(), clk) != e.resets.end())
            throw TaParseError(line_no, static_cast<int>(consumed + a) + 1,
                               "duplicate reset of x" + std::to_string(clk));
          e.resets.push_back(clk);
          any = true;
          consumed += item.size() + 1;
        }
        if (!any)
          throw TaParseError(line_no, rc, "empty reset list");
        std::sort(e.resets.begin(), e.resets.end());
      }
      for (const GuardAtom& a : e.guard)
        ta.max_constant = std::max(ta.max_constant, atom_constant(a));
      ta.edges.push_back(std::move(e));
      continue;
    }
    throw TaParseError(line_no, kw_col, "unknown directive '" + kw + "'");
  }
  if (!have_clocks) throw TaParseError(line_no, 1, "missing clocks header");
  return ta;
}

TimedAutomaton normalize_automaton(const TimedAutomaton& ta) {
  TimedAutomaton r = ta;
  if (!r.has_reference) {
    r.clock_count += 1;
    r.has_reference = true;
  }

  // x > k splits into the fractional case k<x<k+1 and the integer case
  // x >= k+1, one edge copy per combination.
  std::vector<Edge> stage1;
  for (const Edge& e : r.edges) {
    std::vector<Guard> variants{Guard{}};
    for (const GuardAtom& a : e.guard) {
      if (a.rel == GuardRel::gt) {
        std::vector<Guard> next;
        next.reserve(variants.size() * 2);
        for (const Guard& g : variants) {
          Guard lo = g;
          lo.push_back({a.clock, GuardRel::open_unit, a.k});
          Guard hi = g;
          hi.push_back({a.clock, GuardRel::ge, a.k + 1});
          next.push_back(std::move(lo));
          next.push_back(std::move(hi));
        }
        variants = std::move(next);
      } else {
        for (Guard& g : variants) g.push_back(a);
      }
    }
    for (Guard& g : variants) {
      sort_guard(g);
      stage1.push_back({e.source, std::move(g), e.resets, e.target});
    }
  }

  // Multi-reset edges become chains through fresh locations. Every edge
  // after the first is guarded x=0 on the clock reset just before it, so
  // no time can pass inside the chain.
  std::vector<Edge> stage2;
  std::set<std::string> used(r.locations.begin(), r.locations.end());
  int fresh_counter = 0;
  for (const Edge& e : stage1) {
    if (e.resets.size() <= 1) {
      stage2.push_back(e);
      continue;
    }
    std::string prev = e.source;
    Guard g = e.guard;
    for (std::size_t i = 0; i < e.resets.size(); ++i) {
      bool last = i + 1 == e.resets.size();
      std::string next_loc = last ? e.target : fresh_location(used, fresh_counter);
      if (!last) r.locations.push_back(next_loc);
      stage2.push_back({prev, g, {e.resets[i]}, next_loc});
      g = Guard{{e.resets[i], GuardRel::eq, 0}};
      prev = next_loc;
    }
  }
  r.edges = std::move(stage2);

  r.max_constant = 0;
  for (const Edge& e : r.edges)
    for (const GuardAtom& a : e.guard)
      r.max_constant = std::max(r.max_constant, atom_constant(a));
  return r;
}

GuardSplit decompose_guard(const Guard& g) {
  GuardSplit s;
  for (const GuardAtom& a : g) {
    switch (a.rel) {
      case GuardRel::lt:
        s.int_part.push_back({a.clock, IntRel::le, a.k - 1});
        s.frac_part.push_back({a.clock, FracRel::lt1});
        break;
      case GuardRel::eq:
        s.int_part.push_back({a.clock, IntRel::eq, a.k});
        s.frac_part.push_back({a.clock, FracRel::eq0});
        break;
      case GuardRel::open_unit:
        s.int_part.push_back({a.clock, IntRel::eq, a.k});
        s.frac_part.push_back({a.clock, FracRel::open01});
        break;
      case GuardRel::ge:
        s.int_part.push_back({a.clock, IntRel::ge, a.k});
        s.frac_part.push_back({a.clock, FracRel::ge0});
        break;
      case GuardRel::gt:
        throw std::logic_error("guard not atomized (x>k present); run normalize_automaton first");
    }
  }
  return s;
}

bool guard_sat(const Guard& g, const std::vector<Rat>& val) {
  for (const GuardAtom& a : g) {
    if (a.clock < 1 || static_cast<std::size_t>(a.clock) > val.size())
      throw std::invalid_argument("guard clock out of range");
    if (!atom_sat(a, val[a.clock - 1])) return false;
  }
  return true;
}

bool int_sat(const std::vector<IntAtom>& atoms, const std::vector<long long>& floors) {
  for (const IntAtom& a : atoms) {
    if (a.counter < 1 || static_cast<std::size_t>(a.counter) > floors.size())
      throw std::invalid_argument("counter index out of range");
    long long v = floors[a.counter - 1];
    bool ok = a.rel == IntRel::le ? v <= a.k : a.rel == IntRel::eq ? v == a.k : v >= a.k;
    if (!ok) return false;
  }
  return true;
}

bool frac_sat(const std::vector<FracAtom>& atoms, const std::vector<Rat>& fracs) {
  for (const FracAtom& a : atoms) {
    if (a.clock < 1 || static_cast<std::size_t>(a.clock) > fracs.size())
      throw std::invalid_argument("clock index out of range");
    const Rat& v = fracs[a.clock - 1];
    bool ok = false;
    switch (a.rel) {
      case FracRel::lt1:
        ok = v < Rat(1);
        break;
      case FracRel::eq0:
        ok = v == Rat(0);
        break;
      case FracRel::open01:
        ok = Rat(0) < v && v < Rat(1);
        break;
      case FracRel::ge0:
        ok = v >= Rat(0);
        break;
    }
    if (!ok) return false;
  }
  return true;
}

StepAction act_delay(const Rat& d) {
  StepAction a;
  a.kind = StepAction::Kind::delay;
  a.d = d;
  return a;
}

StepAction act_edge(std::size_t edge_index) {
  StepAction a;
  a.kind = StepAction::Kind::edge;
  a.edge = edge_index;
  return a;
}

Config concrete_step(const TimedAutomaton& ta, const Config& cfg, const StepAction& a) {
  if (static_cast<int>(cfg.val.size()) != ta.clock_count)
    throw std::invalid_argument("valuation arity does not match the clock count");
  if (a.kind == StepAction::Kind::delay) {
    if (a.d < Rat(0)) throw std::invalid_argument("negative delay");
    Config out = cfg;
    for (Rat& v : out.val) v += a.d;
    return out;
  }
  if (a.edge >= ta.edges.size()) throw std::invalid_argument("edge index out of range");
  const Edge& e = ta.edges[a.edge];
  if (cfg.location != e.source || !guard_sat(e.guard, cfg.val))
    throw std::runtime_error("edge not enabled");
  Config out;
  out.location = e.target;
  out.val = cfg.val;
  for (int i : e.resets) out.val[i - 1] = Rat(0);
  return out;
}

std::string guard_str(const Guard& g) {
  if (g.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += "&";
    const GuardAtom& a = g[i];
    std::string x = "x" + std::to_string(a.clock);
    switch (a.rel) {
      case GuardRel::lt:
        out += x + "<" + std::to_string(a.k);
        break;
      case GuardRel::eq:
        out += x + "=" + std::to_string(a.k);
        break;
      case GuardRel::open_unit:
        out += std::to_string(a.k) + "<" + x + "<" + std::to_string(a.k + 1);
        break;
      case GuardRel::ge:
        out += x + ">=" + std::to_string(a.k);
        break;
      case GuardRel::gt:
        out += x + ">" + std::to_string(a.k);
        break;
    }
  }
  return out;
}

}  // namespace tarel
