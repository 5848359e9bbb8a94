#include "alba/term.hpp"

#include <cassert>

namespace alba {

namespace {
TermPtr mk(Kind k, std::string name, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}
}  // namespace

TermPtr var(std::string name) { return mk(Kind::Var, std::move(name), {}); }
TermPtr nom(std::string name) { return mk(Kind::Nom, std::move(name), {}); }
TermPtr conom(std::string name) { return mk(Kind::Conom, std::move(name), {}); }
TermPtr top() { return mk(Kind::Top, {}, {}); }
TermPtr bot() { return mk(Kind::Bot, {}, {}); }
TermPtr meet(TermPtr a, TermPtr b) {
  return mk(Kind::Meet, {}, {std::move(a), std::move(b)});
}
TermPtr join(TermPtr a, TermPtr b) {
  return mk(Kind::Join, {}, {std::move(a), std::move(b)});
}
TermPtr app(std::string conn, std::vector<TermPtr> args) {
  return mk(Kind::App, std::move(conn), std::move(args));
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool equal(const Inequality& a, const Inequality& b) {
  return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
}

TermPtr join_all(const std::vector<TermPtr>& ts) {
  if (ts.empty()) return bot();
  TermPtr acc = ts[0];
  for (size_t i = 1; i < ts.size(); ++i) acc = join(acc, ts[i]);
  return acc;
}

TermPtr meet_all(const std::vector<TermPtr>& ts) {
  if (ts.empty()) return top();
  TermPtr acc = ts[0];
  for (size_t i = 1; i < ts.size(); ++i) acc = meet(acc, ts[i]);
  return acc;
}

TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& u) {
  if (t->kind == Kind::Var) return t->name == v ? u : t;
  if (t->args.empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const TermPtr& a : t->args) {
    args.push_back(substitute(a, v, u));
    changed = changed || args.back().get() != a.get();
  }
  if (!changed) return t;
  return mk(t->kind, t->name, std::move(args));
}

Inequality substitute(const Inequality& iq, const std::string& v,
                      const TermPtr& u) {
  return {substitute(iq.lhs, v, u), substitute(iq.rhs, v, u)};
}

bool contains_var(const TermPtr& t, const std::string& v) {
  if (t->kind == Kind::Var) return t->name == v;
  for (const TermPtr& a : t->args)
    if (contains_var(a, v)) return true;
  return false;
}

bool is_pure(const TermPtr& t) {
  if (t->kind == Kind::Var) return false;
  for (const TermPtr& a : t->args)
    if (!is_pure(a)) return false;
  return true;
}

bool is_pure(const Inequality& iq) { return is_pure(iq.lhs) && is_pure(iq.rhs); }

namespace {
void collect(const TermPtr& t, Kind k, std::set<std::string>& out) {
  if (t->kind == k) out.insert(t->name);
  for (const TermPtr& a : t->args) collect(a, k, out);
}
}  // namespace

std::set<std::string> variables(const TermPtr& t) {
  std::set<std::string> out;
  collect(t, Kind::Var, out);
  return out;
}

std::set<std::string> variables(const Inequality& iq) {
  std::set<std::string> out;
  collect(iq.lhs, Kind::Var, out);
  collect(iq.rhs, Kind::Var, out);
  return out;
}

std::set<std::string> nominals(const TermPtr& t) {
  std::set<std::string> out;
  collect(t, Kind::Nom, out);
  return out;
}

std::set<std::string> conominals(const TermPtr& t) {
  std::set<std::string> out;
  collect(t, Kind::Conom, out);
  return out;
}

namespace {
void polarity_walk(const TermPtr& t, const Signature& sig, const std::string& v,
                   bool pos, bool& sawPos, bool& sawNeg) {
  switch (t->kind) {
    case Kind::Var:
      if (t->name == v) (pos ? sawPos : sawNeg) = true;
      return;
    case Kind::Nom:
    case Kind::Conom:
    case Kind::Top:
    case Kind::Bot:
      return;
    case Kind::Meet:
    case Kind::Join:
      polarity_walk(t->args[0], sig, v, pos, sawPos, sawNeg);
      polarity_walk(t->args[1], sig, v, pos, sawPos, sawNeg);
      return;
    case Kind::App: {
      const Connective& c = sig.at(t->name);
      for (size_t i = 0; i < t->args.size(); ++i) {
        bool child = c.eps[i] == Pol::One ? pos : !pos;
        polarity_walk(t->args[i], sig, v, child, sawPos, sawNeg);
      }
      return;
    }
  }
}
}  // namespace

Polarity polarity(const TermPtr& t, const Signature& sig,
                  const std::string& v) {
  bool sawPos = false, sawNeg = false;
  polarity_walk(t, sig, v, true, sawPos, sawNeg);
  if (sawPos && sawNeg) return Polarity::Both;
  if (sawPos) return Polarity::Positive;
  if (sawNeg) return Polarity::Negative;
  return Polarity::Absent;
}

namespace {
// Shape walk shared by both predicates. `closed` selects the closed reading.
bool shape_walk(const TermPtr& t, const Signature& sig, bool pos, bool closed) {
  switch (t->kind) {
    case Kind::Var:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Nom:
      return pos == closed;
    case Kind::Conom:
      return pos != closed;
    case Kind::Meet:
    case Kind::Join:
      return shape_walk(t->args[0], sig, pos, closed) &&
             shape_walk(t->args[1], sig, pos, closed);
    case Kind::App: {
      const Connective& c = sig.at(t->name);
      if (c.origin == OriginKind::Residual || c.origin == OriginKind::Adjoint) {
        // F*-placed residuals/adjoints pattern with nominals, G*-placed with
        // conominals.
        bool wantPos = is_f_family(c.family) == closed;
        if (pos != wantPos) return false;
      }
      for (size_t i = 0; i < t->args.size(); ++i) {
        bool child = c.eps[i] == Pol::One ? pos : !pos;
        if (!shape_walk(t->args[i], sig, child, closed)) return false;
      }
      return true;
    }
  }
  return true;
}
}  // namespace

bool syntactic_closed(const TermPtr& t, const Signature& sig) {
  return shape_walk(t, sig, true, true);
}

bool syntactic_open(const TermPtr& t, const Signature& sig) {
  return shape_walk(t, sig, true, false);
}

namespace {
// Precedence levels: join 0 < meet 1 < infix application 2 < primary 3.
int level(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Join: return 0;
    case Kind::Meet: return 1;
    case Kind::App: return t->args.size() == 2 ? 2 : 3;
    default: return 3;
  }
}

void print(const TermPtr& t, const Signature& sig, int min_level,
           std::string& out) {
  bool paren = level(t) < min_level;
  if (paren) out += '(';
  switch (t->kind) {
    case Kind::Var: out += t->name; break;
    case Kind::Nom: out += '#'; out += t->name; break;
    case Kind::Conom: out += '@'; out += t->name; break;
    case Kind::Top: out += "top"; break;
    case Kind::Bot: out += "bot"; break;
    case Kind::Join:
      print(t->args[0], sig, 0, out);
      out += " \\/ ";
      print(t->args[1], sig, 1, out);
      break;
    case Kind::Meet:
      print(t->args[0], sig, 1, out);
      out += " /\\ ";
      print(t->args[1], sig, 2, out);
      break;
    case Kind::App:
      if (t->args.empty()) {
        out += t->name;
      } else if (t->args.size() == 2) {
        print(t->args[0], sig, 3, out);
        out += ' ';
        out += t->name;
        out += ' ';
        print(t->args[1], sig, 3, out);
      } else {
        out += t->name;
        out += '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) out += ", ";
          print(t->args[i], sig, 0, out);
        }
        out += ')';
      }
      break;
  }
  if (paren) out += ')';
}
}  // namespace

std::string print_term(const TermPtr& t, const Signature& sig) {
  std::string out;
  print(t, sig, 0, out);
  return out;
}

std::string print_ineq(const Inequality& iq, const Signature& sig) {
  return print_term(iq.lhs, sig) + " <= " + print_term(iq.rhs, sig);
}

}  // namespace alba
