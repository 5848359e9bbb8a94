#include "alba/engine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace alba {

bool is_pure(const TaggedInequality& t) { return is_pure(t.ineq); }

int System::add_member(Inequality iq, bool side) {
  TaggedInequality m;
  m.ineq = std::move(iq);
  m.side_condition = side;
  m.id = next_id++;
  members.push_back(std::move(m));
  return members.back().id;
}

std::string to_string(ApproxFlavor f) {
  switch (f) {
    case ApproxFlavor::LPos: return "approx-L+";
    case ApproxFlavor::LNeg: return "approx-L-";
    case ApproxFlavor::RPos: return "approx-R+";
    case ApproxFlavor::RNeg: return "approx-R-";
  }
  return "?";
}

std::string print_system(const System& sys, const Signature& sig) {
  std::string out;
  for (const TaggedInequality& m : sys.members) {
    out += print_ineq(m.ineq, sig);
    if (m.side_condition) out += " [side]";
    out += '\n';
  }
  out += "|- ";
  out += print_ineq(sys.goal, sig);
  out += '\n';
  return out;
}

namespace {

TermPtr replace_at(const TermPtr& t, const Path& p, size_t depth,
                   const TermPtr& u) {
  if (depth == p.size()) return u;
  int i = p[depth];
  if (i < 1 || (size_t)i > t->args.size())
    throw EngineError("path leaves the term");
  std::vector<TermPtr> args = t->args;
  args[i - 1] = replace_at(args[i - 1], p, depth + 1, u);
  switch (t->kind) {
    case Kind::Meet: return meet(args[0], args[1]);
    case Kind::Join: return join(args[0], args[1]);
    case Kind::App: return app(t->name, std::move(args));
    default: throw EngineError("path leaves the term");
  }
}

TermPtr replace_at(const TermPtr& t, const Path& p, const TermPtr& u) {
  return replace_at(t, p, 0, u);
}

// gamma admissibility: base-language term, or a single nominal/conominal.
bool base_language(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
    case Kind::Nom:
    case Kind::Conom:
      return false;
    case Kind::App:
      if (sig.at(t->name).origin != OriginKind::Base) return false;
      break;
    default:
      break;
  }
  for (const TermPtr& a : t->args)
    if (!base_language(a, sig)) return false;
  return true;
}

bool gamma_admissible(const TermPtr& t, const Signature& sig) {
  return t->kind == Kind::Nom || t->kind == Kind::Conom ||
         base_language(t, sig);
}

struct GoalSide {
  bool lhs;            // which side of the goal
  bool tree_positive;  // sign of that side's generation tree root
};

GoalSide flavor_side(ApproxFlavor f) {
  switch (f) {
    case ApproxFlavor::LPos:
    case ApproxFlavor::LNeg:
      return {true, true};
    default:
      return {false, false};
  }
}

bool flavor_sign(ApproxFlavor f) {
  return f == ApproxFlavor::LPos || f == ApproxFlavor::RPos;
}

std::string fresh_nom(System& sys) {
  return "j" + std::to_string(++sys.nom_counter);
}

std::string fresh_conom(System& sys) {
  return "m" + std::to_string(++sys.conom_counter);
}

// Numeric-aware name order so j2 sorts before j10.
bool atom_less(const std::string& a, const std::string& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && !std::isdigit((unsigned char)a[i])) ++i;
  while (j < b.size() && !std::isdigit((unsigned char)b[j])) ++j;
  if (a.compare(0, i, b, 0, j) != 0) return a.compare(0, i, b, 0, j) < 0;
  long an = i < a.size() ? std::stol(a.substr(i)) : -1;
  long bn = j < b.size() ? std::stol(b.substr(j)) : -1;
  if (an != bn) return an < bn;
  return a < b;
}

bool equal_member(const TaggedInequality& a, const TaggedInequality& b) {
  return a.id == b.id && a.side_condition == b.side_condition &&
         equal(a.ineq, b.ineq);
}

bool equal_system(const System& a, const System& b) {
  if (a.members.size() != b.members.size()) return false;
  for (size_t i = 0; i < a.members.size(); ++i)
    if (!equal_member(a.members[i], b.members[i])) return false;
  return equal(a.goal, b.goal);
}

}  // namespace

bool approximation_pivotal(const System& sys, const Signature& sig,
                           ApproxFlavor flavor, const Path& path) {
  GoalSide gs = flavor_side(flavor);
  SignedTree tree = build_signed_tree(gs.lhs ? sys.goal.lhs : sys.goal.rhs,
                                      gs.tree_positive, sig);
  const SignedNode& n = tree.at(path);
  return n.cls == NodeClass::Leaf || !sac_admissible(n);
}

System apply_approximation(const System& sys, const Signature& sig,
                           ApproxFlavor flavor, const Path& path,
                           bool pivotal_mode) {
  GoalSide gs = flavor_side(flavor);
  TermPtr side = gs.lhs ? sys.goal.lhs : sys.goal.rhs;
  SignedTree tree = build_signed_tree(side, gs.tree_positive, sig);
  const SignedNode& n = tree.at(path);
  if (n.positive != flavor_sign(flavor))
    throw EngineError("approximation sign mismatch at " +
                      path_to_string(path));
  Path up = path;
  while (!up.empty()) {
    up.pop_back();
    if (!sac_admissible(tree.at(up)))
      throw EngineError("branch above " + path_to_string(path) +
                        " is not SAC");
  }
  TermPtr gamma = n.term;
  if (!gamma_admissible(gamma, sig))
    throw EngineError("displaced subterm is not admissible at " +
                      path_to_string(path));
  if (pivotal_mode && !approximation_pivotal(sys, sig, flavor, path))
    throw EngineError("approximation not pivotal at " + path_to_string(path));

  System out = sys;
  TermPtr hole;
  Inequality member;
  if (n.positive) {
    hole = nom(fresh_nom(out));
    member = {hole, gamma};
  } else {
    hole = conom(fresh_conom(out));
    member = {gamma, hole};
  }
  TermPtr replaced = replace_at(side, path, hole);
  if (gs.lhs)
    out.goal.lhs = replaced;
  else
    out.goal.rhs = replaced;
  out.add_member(member);
  return out;
}

System apply_split(const System& sys, const Signature& sig, int index) {
  (void)sig;
  if (index < 0 || (size_t)index >= sys.members.size())
    throw EngineError("no member at index " + std::to_string(index));
  const TaggedInequality& m = sys.members[index];
  System out = sys;
  std::vector<Inequality> parts;
  if (m.ineq.lhs->kind == Kind::Join) {
    parts = {{m.ineq.lhs->args[0], m.ineq.rhs},
             {m.ineq.lhs->args[1], m.ineq.rhs}};
  } else if (m.ineq.rhs->kind == Kind::Meet) {
    parts = {{m.ineq.lhs, m.ineq.rhs->args[0]},
             {m.ineq.lhs, m.ineq.rhs->args[1]}};
  } else {
    throw EngineError("member is not splittable");
  }
  out.members.erase(out.members.begin() + index);
  for (size_t k = 0; k < parts.size(); ++k) {
    TaggedInequality t;
    t.ineq = parts[k];
    t.side_condition = false;
    t.id = out.next_id++;
    out.members.insert(out.members.begin() + index + k, std::move(t));
  }
  return out;
}

namespace {

// Residuation of a normal head; `lhs_head` tells which side is decomposed.
Inequality residuate_normal(const Inequality& iq, const Signature& sig,
                            bool lhs_head, int coord) {
  const TermPtr& head = lhs_head ? iq.lhs : iq.rhs;
  const TermPtr& other = lhs_head ? iq.rhs : iq.lhs;
  const Connective& c = sig.at(head->name);
  if (coord < 1 || coord > c.arity)
    throw EngineError("bad residuation coordinate");
  auto rn = residual_name(sig, c, coord);
  if (!rn) throw EngineError("head not residuable: " + head->name);
  std::vector<TermPtr> args = head->args;
  TermPtr moved = args[coord - 1];
  args[coord - 1] = other;
  TermPtr res = app(*rn, std::move(args));
  bool one = c.eps[coord - 1] == Pol::One;
  if (lhs_head)  // f(a..) <= psi
    return one ? Inequality{moved, res} : Inequality{res, moved};
  // psi <= g(a..)
  return one ? Inequality{res, moved} : Inequality{moved, res};
}

std::string black_name(const Signature& sig, const Connective& base) {
  // The adjoint of the normalization of a regular connective.
  for (const Connective& c : sig.connectives)
    if (c.origin == OriginKind::Adjoint) {
      const Connective& norm = sig.at(c.parent);
      if (norm.parent == base.name) return c.name;
    }
  throw EngineError("no black adjoint for " + base.name);
}

}  // namespace

System apply_residuation(const System& sys, const Signature& sig, int index,
                         int coordinate) {
  if (index < 0 || (size_t)index >= sys.members.size())
    throw EngineError("no member at index " + std::to_string(index));
  const TaggedInequality& m = sys.members[index];
  bool lhs_f = m.ineq.lhs->kind == Kind::App &&
               is_f_family(sig.at(m.ineq.lhs->name).family);
  bool rhs_g = m.ineq.rhs->kind == Kind::App &&
               is_g_family(sig.at(m.ineq.rhs->name).family);
  bool lhs_head;
  if (lhs_f && rhs_g)
    lhs_head = !is_pure(m.ineq.lhs) || is_pure(m.ineq.rhs);
  else if (lhs_f)
    lhs_head = true;
  else if (rhs_g)
    lhs_head = false;
  else
    throw EngineError("no residuable head in member " + std::to_string(index));

  const TermPtr& head = lhs_head ? m.ineq.lhs : m.ineq.rhs;
  const Connective& c = sig.at(head->name);
  System out = sys;
  if (is_regular(c.family)) {
    if (coordinate != 1) throw EngineError("regular heads are unary");
    TermPtr arg = head->args[0];
    TermPtr other = lhs_head ? m.ineq.rhs : m.ineq.lhs;
    bool one = c.eps[0] == Pol::One;
    Inequality side_cond, main;
    std::string black = black_name(sig, c);
    if (lhs_head) {  // f(phi) <= psi
      side_cond = {app(c.name, {one ? bot() : top()}), other};
      main = one ? Inequality{arg, app(black, {other})}
                 : Inequality{app(black, {other}), arg};
    } else {  // phi <= g(psi)
      side_cond = {other, app(c.name, {one ? top() : bot()})};
      main = one ? Inequality{app(black, {other}), arg}
                 : Inequality{arg, app(black, {other})};
    }
    out.members.erase(out.members.begin() + index);
    TaggedInequality sc;
    sc.ineq = side_cond;
    sc.side_condition = true;
    sc.id = out.next_id++;
    out.members.insert(out.members.begin() + index, std::move(sc));
    TaggedInequality mn;
    mn.ineq = main;
    mn.side_condition = false;
    mn.id = out.next_id++;
    out.members.insert(out.members.begin() + index + 1, std::move(mn));
    return out;
  }
  Inequality next = residuate_normal(m.ineq, sig, lhs_head, coordinate);
  out.members[index].ineq = next;
  out.members[index].side_condition = false;
  out.members[index].id = out.next_id++;
  return out;
}

namespace {

// Critical leaves of a member wrt v read in the -lhs / +rhs convention.
std::vector<std::pair<bool, Path>> member_critical_leaves(
    const Inequality& iq, const Signature& sig, const std::string& v,
    Pol pol) {
  std::vector<std::pair<bool, Path>> out;
  bool want_positive = pol == Pol::One;
  auto scan = [&](const TermPtr& t, bool root_sign, bool in_lhs) {
    SignedTree tree = build_signed_tree(t, root_sign, sig);
    for (const SignedNode& n : tree.nodes)
      if (n.term->kind == Kind::Var && n.term->name == v &&
          n.positive == want_positive)
        out.push_back({in_lhs, n.path});
  };
  scan(iq.lhs, false, true);
  scan(iq.rhs, true, false);
  return out;
}

bool member_ready(const TaggedInequality& m, const Signature& sig,
                  const std::string& v, Pol pol) {
  if (pol == Pol::One) {
    if (m.ineq.rhs->kind == Kind::Var && m.ineq.rhs->name == v &&
        is_pure(m.ineq.lhs))
      return true;
  } else {
    if (m.ineq.lhs->kind == Kind::Var && m.ineq.lhs->name == v &&
        is_pure(m.ineq.rhs))
      return true;
  }
  return member_critical_leaves(m.ineq, sig, v, pol).empty();
}

}  // namespace

bool is_ackermann_ready(const System& sys, const Signature& sig,
                        const std::string& v, Pol eps_v) {
  if (contains_var(sys.goal.lhs, v) || contains_var(sys.goal.rhs, v))
    return false;
  for (const TaggedInequality& m : sys.members)
    if (!member_ready(m, sig, v, eps_v)) return false;
  return true;
}

System apply_ackermann(const System& sys, const Signature& sig,
                       const std::string& v, AckSide side) {
  Pol pol = side == AckSide::Right ? Pol::One : Pol::Partial;
  if (!is_ackermann_ready(sys, sig, v, pol))
    throw EngineError("system is not Ackermann-ready for " + v);
  std::vector<TermPtr> alphas;
  System out = sys;
  out.members.clear();
  std::vector<int> touched;
  // First pass: collect the defining members.
  for (const TaggedInequality& m : sys.members) {
    bool def = side == AckSide::Right
                   ? m.ineq.rhs->kind == Kind::Var && m.ineq.rhs->name == v &&
                         !contains_var(m.ineq.lhs, v)
                   : m.ineq.lhs->kind == Kind::Var && m.ineq.lhs->name == v &&
                         !contains_var(m.ineq.rhs, v);
    if (def)
      alphas.push_back(side == AckSide::Right ? m.ineq.lhs : m.ineq.rhs);
  }
  TermPtr a =
      side == AckSide::Right ? join_all(alphas) : meet_all(alphas);
  for (const TaggedInequality& m : sys.members) {
    bool def = side == AckSide::Right
                   ? m.ineq.rhs->kind == Kind::Var && m.ineq.rhs->name == v &&
                         !contains_var(m.ineq.lhs, v)
                   : m.ineq.lhs->kind == Kind::Var && m.ineq.lhs->name == v &&
                         !contains_var(m.ineq.rhs, v);
    if (def) continue;
    TaggedInequality keep = m;
    if (contains_var(m.ineq.lhs, v) || contains_var(m.ineq.rhs, v))
      keep.ineq = substitute(m.ineq, v, a);  // tags survive the substitution
    out.members.push_back(std::move(keep));
  }
  return out;
}

bool is_stripped(const System& sys, const Signature& sig,
                 const Certificate& cert) {
  if (!is_pure(sys.goal)) return false;
  for (const TaggedInequality& m : sys.members) {
    bool lp = is_pure(m.ineq.lhs), rp = is_pure(m.ineq.rhs);
    if (!lp && !rp) return false;
    if (!lp && !is_inductive_tree(m.ineq.lhs, false, sig, cert).holds)
      return false;
    if (!rp && !is_inductive_tree(m.ineq.rhs, true, sig, cert).holds)
      return false;
    // Every critical branch must be PIA all the way up.
    auto check_pia = [&](const TermPtr& t, bool root_sign) {
      SignedTree tree = build_signed_tree(t, root_sign, sig);
      for (const SignedNode& n : tree.nodes) {
        if (n.term->kind != Kind::Var) continue;
        auto e = eps_lookup(cert.eps, n.term->name);
        if (!e || !is_critical_sign(n.positive, *e)) continue;
        if (!analyze_branch(tree, n.path).p2_nodes.empty()) return false;
      }
      return true;
    };
    if (!check_pia(m.ineq.lhs, false) || !check_pia(m.ineq.rhs, true))
      return false;
  }
  return true;
}

bool check_topological_adequacy(const System& sys, const Signature& sig) {
  auto present = [&](const Inequality& want) {
    for (const TaggedInequality& m : sys.members)
      if (equal(m.ineq, want)) return true;
    return false;
  };
  auto base_of_black = [&](const std::string& name) -> const Connective& {
    const Connective& norm = sig.at(sig.at(name).parent);
    return sig.at(norm.parent);
  };
  for (const TaggedInequality& m : sys.members) {
    const TermPtr& l = m.ineq.lhs;
    const TermPtr& r = m.ineq.rhs;
    if (r->kind == Kind::App && sig.at(r->name).origin == OriginKind::Adjoint) {
      const Connective& base = base_of_black(r->name);
      if (base.family == Family::Fr && base.eps[0] == Pol::One) {
        // phi <= bbox_f(psi) demands f(bot) <= psi
        if (!present({app(base.name, {bot()}), r->args[0]})) return false;
      } else if (base.family == Family::Gr && base.eps[0] == Pol::Partial) {
        // phi <= btr_g(psi) demands psi <= g(bot)
        if (!present({r->args[0], app(base.name, {bot()})})) return false;
      }
    }
    if (l->kind == Kind::App && sig.at(l->name).origin == OriginKind::Adjoint) {
      const Connective& base = base_of_black(l->name);
      if (base.family == Family::Gr && base.eps[0] == Pol::One) {
        // bdia_g(phi) <= psi demands phi <= g(top)
        if (!present({l->args[0], app(base.name, {top()})})) return false;
      } else if (base.family == Family::Fr && base.eps[0] == Pol::Partial) {
        // btl_f(phi) <= psi demands f(top) <= phi
        if (!present({app(base.name, {top()}), l->args[0]})) return false;
      }
    }
  }
  return true;
}

bool check_compact_appropriate(const System& sys, const Signature& sig) {
  for (const TaggedInequality& m : sys.members) {
    if (is_pure(m.ineq)) continue;
    if (!syntactic_closed(m.ineq.lhs, sig)) return false;
    if (!syntactic_open(m.ineq.rhs, sig)) return false;
  }
  return true;
}

bool check_safety(const Trace& trace) {
  const System* prev = &trace.initial;
  for (const TraceStep& s : trace.steps) {
    for (int id : s.modified_ids)
      for (const TaggedInequality& m : prev->members)
        if (m.id == id && m.side_condition && !s.is_ackermann) return false;
    prev = &s.after;
  }
  return true;
}

System apply_goal_residuation(const System& sys, const Signature& sig,
                              bool rhs_head, int coordinate) {
  const TermPtr& head = rhs_head ? sys.goal.rhs : sys.goal.lhs;
  if (head->kind != Kind::App)
    throw EngineError("goal head is not a connective");
  const Connective& c = sig.at(head->name);
  bool ok = rhs_head ? is_g_family(c.family) : is_f_family(c.family);
  if (!ok || is_regular(c.family))
    throw EngineError("goal head not residuable: " + head->name);
  System out = sys;
  out.goal = residuate_normal(sys.goal, sig, !rhs_head, coordinate);
  return out;
}

namespace {

void push_step(Trace& tr, System after, std::string rule, std::string at,
               std::vector<int> modified = {}, bool ackermann = false,
               bool pivotal = false, Path path = {}, int member = -1,
               int coord = 0, std::string var = {}) {
  TraceStep s;
  s.rule = std::move(rule);
  s.at = std::move(at);
  s.path = std::move(path);
  s.member = member;
  s.coord = coord;
  s.var = std::move(var);
  s.pivotal = pivotal;
  s.is_ackermann = ackermann;
  s.modified_ids = std::move(modified);
  s.after = std::move(after);
  tr.steps.push_back(std::move(s));
}

// Positions where the goal-stripping approximations go: descend while the
// node keeps an SAC-admissible branch, stop at the first inadmissible node or
// leaf, and skip subtrees that are already free of propositional variables.
void frontier_positions(const SignedTree& tree, const Path& at,
                        std::vector<Path>& out) {
  const SignedNode& n = tree.at(at);
  if (!is_pure(n.term)) {
    if (n.cls != NodeClass::Leaf && sac_admissible(n)) {
      for (size_t i = 1; i <= n.term->args.size(); ++i) {
        Path child = at;
        child.push_back((int)i);
        frontier_positions(tree, child, out);
      }
      return;
    }
    out.push_back(at);
  }
}

void strip_goal(System& sys, Trace& tr, const Signature& sig, bool pivotal) {
  for (bool lhs : {true, false}) {
    SignedTree tree = build_signed_tree(lhs ? sys.goal.lhs : sys.goal.rhs,
                                        lhs, sig);
    std::vector<Path> fronts;
    frontier_positions(tree, {}, fronts);
    for (const Path& p : fronts) {
      bool pos = tree.at(p).positive;
      ApproxFlavor fl = lhs ? (pos ? ApproxFlavor::LPos : ApproxFlavor::LNeg)
                            : (pos ? ApproxFlavor::RPos : ApproxFlavor::RNeg);
      bool piv = approximation_pivotal(sys, sig, fl, p);
      sys = apply_approximation(sys, sig, fl, p, pivotal);
      push_step(tr, sys, to_string(fl), path_to_string(p), {}, false, piv, p);
    }
  }
}

// One peeling move toward Ackermann-readiness of member `index` wrt v.
void peel_member(System& sys, Trace& tr, const Signature& sig, int index,
                 const std::string& v, Pol pol) {
  const TaggedInequality& m = sys.members[index];
  auto occs = member_critical_leaves(m.ineq, sig, v, pol);
  if (occs.empty())
    throw EngineError("nothing to peel in member " + std::to_string(index));
  bool in_lhs = occs[0].first;
  const Path& path = occs[0].second;
  const TermPtr& side = in_lhs ? m.ineq.lhs : m.ineq.rhs;
  int old_id = m.id;
  if ((in_lhs && side->kind == Kind::Join) ||
      (!in_lhs && side->kind == Kind::Meet)) {
    sys = apply_split(sys, sig, index);
    push_step(tr, sys, "split", std::to_string(index), {old_id}, false, false,
              {}, index);
    return;
  }
  if (side->kind == Kind::App) {
    const Connective& c = sig.at(side->name);
    bool family_ok = in_lhs ? is_f_family(c.family) : is_g_family(c.family);
    if (family_ok) {
      int coord = path.empty() ? 1 : path[0];
      std::string rule =
          is_regular(c.family) ? "regular-residuate" : "residuate";
      sys = apply_residuation(sys, sig, index, coord);
      push_step(tr, sys, rule, std::to_string(index) + ":" +
                                   std::to_string(coord),
                {old_id}, false, false, {}, index, coord);
      return;
    }
  }
  throw EngineError("cannot peel member " + std::to_string(index) +
                    " toward " + v);
}

void make_ready(System& sys, Trace& tr, const Signature& sig,
                const std::string& v, Pol pol, int* budget) {
  for (;;) {
    int bad = -1;
    for (size_t i = 0; i < sys.members.size(); ++i)
      if (!member_ready(sys.members[i], sig, v, pol)) {
        bad = (int)i;
        break;
      }
    if (bad < 0) return;
    if (budget && --*budget < 0) throw EngineError("depth cap reached");
    peel_member(sys, tr, sig, bad, v, pol);
  }
}

std::set<std::string> system_variables(const System& sys) {
  std::set<std::string> out = variables(sys.goal);
  for (const TaggedInequality& m : sys.members) {
    std::set<std::string> vs = variables(m.ineq);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

int count_atom(const TermPtr& t, Kind kind, const std::string& name) {
  int n = 0;
  if (t->kind == kind && t->name == name) ++n;
  for (const TermPtr& a : t->args) n += count_atom(a, kind, name);
  return n;
}

// Final phase: drop defining members j <= A (dually A <= m) whose auxiliary
// variable occurs nowhere else in S and exactly once in the goal, folding A
// into the goal through residuation.
void compress(System& sys, Trace& tr, const Signature& sig) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < sys.members.size(); ++i) {
      const TaggedInequality& m = sys.members[i];
      if (m.side_condition) continue;
      bool nominal = m.ineq.lhs->kind == Kind::Nom;
      bool conominal = m.ineq.rhs->kind == Kind::Conom;
      if (!nominal && !conominal) continue;
      Kind kind = nominal ? Kind::Nom : Kind::Conom;
      std::string name = nominal ? m.ineq.lhs->name : m.ineq.rhs->name;
      TermPtr body = nominal ? m.ineq.rhs : m.ineq.lhs;
      if (count_atom(body, kind, name) > 0) continue;
      int elsewhere = 0;
      for (size_t k = 0; k < sys.members.size(); ++k) {
        if (k == i) continue;
        elsewhere += count_atom(sys.members[k].ineq.lhs, kind, name);
        elsewhere += count_atom(sys.members[k].ineq.rhs, kind, name);
      }
      if (elsewhere != 0) continue;
      if (count_atom(sys.goal.lhs, kind, name) +
              count_atom(sys.goal.rhs, kind, name) !=
          1)
        continue;
      // Try to isolate the atom on its defining side of the goal.
      System probe = sys;
      Trace steps;  // staged compress-res steps
      steps.initial = sys;
      bool isolated = false;
      for (int guard = 0; guard < 64; ++guard) {
        if (nominal && probe.goal.lhs->kind == Kind::Nom &&
            probe.goal.lhs->name == name) {
          isolated = true;
          break;
        }
        if (conominal && probe.goal.rhs->kind == Kind::Conom &&
            probe.goal.rhs->name == name) {
          isolated = true;
          break;
        }
        bool in_lhs = count_atom(probe.goal.lhs, kind, name) == 1;
        const TermPtr& head = in_lhs ? probe.goal.lhs : probe.goal.rhs;
        if (head->kind != Kind::App) break;
        int coord = 0;
        for (size_t a = 0; a < head->args.size(); ++a)
          if (count_atom(head->args[a], kind, name) == 1) coord = (int)a + 1;
        if (coord == 0) break;
        System next;
        try {
          next = apply_goal_residuation(probe, sig, !in_lhs, coord);
        } catch (const EngineError&) {
          break;
        }
        probe = next;
        push_step(steps, probe, "compress-res",
                  (in_lhs ? "lhs:" : "rhs:") + std::to_string(coord), {},
                  false, false, {}, in_lhs ? 0 : 1, coord);
      }
      if (!isolated) continue;
      int old_id = m.id;
      if (nominal)
        probe.goal = {body, probe.goal.rhs};
      else
        probe.goal = {probe.goal.lhs, body};
      probe.members.erase(probe.members.begin() + i);
      for (TraceStep& s : steps.steps) tr.steps.push_back(std::move(s));
      sys = probe;
      push_step(tr, sys, "compress-elim", std::to_string(i), {old_id}, false,
                false, {}, (int)i);
      changed = true;
      break;
    }
  }
}

RunResult run_impl(const Inequality& iq, const Signature& base, bool strategic,
                   const RunOptions& opt) {
  Signature sig = expand_signature(base);
  RunResult res;
  std::optional<Certificate> cert;
  if (strategic) {
    cert = find_inductive_certificate(iq, sig);
    if (!cert) {
      res.reason = "no inductive certificate";
      return res;
    }
    res.cert = cert;
  }
  std::vector<Inequality> batch = preprocess(iq, sig);
  int budget = opt.depth;
  for (const Inequality& piece : batch) {
    System sys;
    sys.goal = piece;
    Trace tr;
    tr.initial = sys;
    try {
      strip_goal(sys, tr, sig, opt.pivotal);
      if (strategic && !is_stripped(sys, sig, *cert))
        throw EngineError("system failed to strip");
      auto eliminate = [&](System& s, Trace& t, const std::string& v, Pol p,
                           int* bud) {
        make_ready(s, t, sig, v, p, bud);
        AckSide side = p == Pol::One ? AckSide::Right : AckSide::Left;
        std::vector<int> touched;
        for (const TaggedInequality& m : s.members)
          if (contains_var(m.ineq.lhs, v) || contains_var(m.ineq.rhs, v))
            touched.push_back(m.id);
        s = apply_ackermann(s, sig, v, side);
        push_step(t, s,
                  side == AckSide::Right ? "ackermann-right"
                                         : "ackermann-left",
                  v, std::move(touched), true, false, {}, -1, 0, v);
      };
      if (strategic) {
        int guard = 100000;
        for (;;) {
          std::set<std::string> remaining = system_variables(sys);
          if (remaining.empty()) break;
          std::string pick;
          for (const std::string& v : remaining) {
            bool minimal = true;
            for (const std::string& w : remaining)
              if (w != v && omega_less(*cert, w, v)) minimal = false;
            if (minimal) {
              pick = v;
              break;
            }
          }
          if (pick.empty()) throw EngineError("no omega-minimal variable");
          eliminate(sys, tr, pick, *eps_lookup(cert->eps, pick), &guard);
        }
      } else {
        // Bounded backtracking over (variable, polarity) choices.
        std::function<bool(System&, Trace&)> search = [&](System& s,
                                                          Trace& t) -> bool {
          std::set<std::string> remaining = system_variables(s);
          if (remaining.empty()) return true;
          for (const std::string& v : remaining) {
            for (Pol p : {Pol::One, Pol::Partial}) {
              System s2 = s;
              Trace t2 = t;
              try {
                eliminate(s2, t2, v, p, &budget);
              } catch (const EngineError& e) {
                if (std::string(e.what()) == "depth cap reached") throw;
                continue;
              }
              if (search(s2, t2)) {
                s = std::move(s2);
                t = std::move(t2);
                return true;
              }
            }
          }
          return false;
        };
        if (!search(sys, tr)) throw EngineError("no applicable rule");
      }
      compress(sys, tr, sig);
      for (const TaggedInequality& m : sys.members)
        if (!is_pure(m.ineq)) throw EngineError("residual variable left");
      if (!is_pure(sys.goal)) throw EngineError("goal not pure");
    } catch (const EngineError& e) {
      res.status = RunStatus::Failure;
      res.reason = e.what();
      res.systems.push_back(sys);
      res.traces.push_back(tr);
      return res;
    }
    res.systems.push_back(sys);
    res.traces.push_back(tr);
  }
  res.status = RunStatus::Success;
  return res;
}

}  // namespace

RunResult run_strategic(const Inequality& iq, const Signature& sig,
                        const RunOptions& opt) {
  return run_impl(iq, sig, true, opt);
}

RunResult run_exhaustive(const Inequality& iq, const Signature& sig,
                         const RunOptions& opt) {
  return run_impl(iq, sig, false, opt);
}

std::vector<Inequality> preprocess(const Inequality& iq,
                                   const Signature& sig) {
  // Distribution pushes the lattice connectives up through the F/G
  // coordinates where the corresponding equational law holds.
  std::function<TermPtr(const TermPtr&)> dist = [&](const TermPtr& t)
      -> TermPtr {
    if (t->args.empty()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args.size());
    for (const TermPtr& a : t->args) args.push_back(dist(a));
    TermPtr cur;
    switch (t->kind) {
      case Kind::Meet: cur = meet(args[0], args[1]); break;
      case Kind::Join: cur = join(args[0], args[1]); break;
      default: cur = app(t->name, args); break;
    }
    if (cur->kind != Kind::App) return cur;
    const Connective& c = sig.at(cur->name);
    for (int i = 0; i < c.arity; ++i) {
      const TermPtr& a = cur->args[i];
      bool fs = is_f_family(c.family);
      bool one = c.eps[i] == Pol::One;
      Kind inner = fs == one ? Kind::Join : Kind::Meet;
      if (a->kind != inner) continue;
      std::vector<TermPtr> l = cur->args, r = cur->args;
      l[i] = a->args[0];
      r[i] = a->args[1];
      TermPtr left = dist(app(cur->name, std::move(l)));
      TermPtr right = dist(app(cur->name, std::move(r)));
      return fs ? join(left, right) : meet(left, right);
    }
    return cur;
  };

  std::vector<Inequality> work{iq}, out;
  bool changed = true;
  while (changed) {
    changed = false;
    out.clear();
    for (Inequality cur : work) {
      // Uniform-variable elimination to fixpoint.
      for (bool again = true; again;) {
        again = false;
        for (const std::string& v : variables(cur)) {
          auto s = uniform_sign(cur, sig, v);
          if (!s) continue;
          cur = substitute(cur, v, *s ? top() : bot());
          again = true;
          changed = true;
        }
      }
      Inequality d{dist(cur.lhs), dist(cur.rhs)};
      if (!equal(d, cur)) changed = true;
      cur = d;
      if (cur.lhs->kind == Kind::Join) {
        out.push_back({cur.lhs->args[0], cur.rhs});
        out.push_back({cur.lhs->args[1], cur.rhs});
        changed = true;
      } else if (cur.rhs->kind == Kind::Meet) {
        out.push_back({cur.lhs, cur.rhs->args[0]});
        out.push_back({cur.lhs, cur.rhs->args[1]});
        changed = true;
      } else {
        out.push_back(cur);
      }
    }
    work = out;
  }
  return work;
}

bool replay_trace(const Trace& trace, const Signature& sig) {
  System cur = trace.initial;
  for (const TraceStep& s : trace.steps) {
    try {
      if (s.rule.rfind("approx-", 0) == 0) {
        ApproxFlavor fl;
        if (s.rule == "approx-L+") fl = ApproxFlavor::LPos;
        else if (s.rule == "approx-L-") fl = ApproxFlavor::LNeg;
        else if (s.rule == "approx-R+") fl = ApproxFlavor::RPos;
        else fl = ApproxFlavor::RNeg;
        cur = apply_approximation(cur, sig, fl, s.path, false);
      } else if (s.rule == "split") {
        cur = apply_split(cur, sig, s.member);
      } else if (s.rule == "residuate" || s.rule == "regular-residuate") {
        cur = apply_residuation(cur, sig, s.member, s.coord);
      } else if (s.rule == "ackermann-right") {
        cur = apply_ackermann(cur, sig, s.var, AckSide::Right);
      } else if (s.rule == "ackermann-left") {
        cur = apply_ackermann(cur, sig, s.var, AckSide::Left);
      } else if (s.rule == "compress-res") {
        cur = apply_goal_residuation(cur, sig, s.member == 1, s.coord);
      } else if (s.rule == "compress-elim") {
        const TaggedInequality& m = cur.members.at(s.member);
        if (m.ineq.lhs->kind == Kind::Nom)
          cur.goal = {m.ineq.rhs, cur.goal.rhs};
        else
          cur.goal = {cur.goal.lhs, m.ineq.lhs};
        cur.members.erase(cur.members.begin() + s.member);
      } else {
        return false;
      }
    } catch (const EngineError&) {
      return false;
    }
    if (!equal_system(cur, s.after)) return false;
  }
  return true;
}

std::string print_quasi_inequality(const System& sys, const Signature& sig) {
  std::set<std::string, bool (*)(const std::string&, const std::string&)>
      atoms(atom_less);
  auto collect = [&](const TermPtr& t) {
    for (const std::string& n : nominals(t)) atoms.insert(n);
    for (const std::string& n : conominals(t)) atoms.insert(n);
  };
  for (const TaggedInequality& m : sys.members) {
    collect(m.ineq.lhs);
    collect(m.ineq.rhs);
  }
  collect(sys.goal.lhs);
  collect(sys.goal.rhs);
  std::string out = "FORALL";
  for (const std::string& a : atoms) {
    out += ' ';
    out += a;
  }
  out += " : ";
  std::vector<std::string> printed;
  for (const TaggedInequality& m : sys.members)
    printed.push_back(print_ineq(m.ineq, sig));
  std::sort(printed.begin(), printed.end());
  for (size_t i = 0; i < printed.size(); ++i) {
    out += printed[i];
    out += i + 1 < printed.size() ? " & " : " => ";
  }
  out += print_ineq(sys.goal, sig);
  return out;
}

std::string print_trace(const Trace& trace, const Signature& sig) {
  std::string out = "initial\n" + print_system(trace.initial, sig);
  int n = 0;
  for (const TraceStep& s : trace.steps) {
    out += "step " + std::to_string(++n) + " rule " + s.rule + " at " + s.at;
    if (s.pivotal) out += " pivotal";
    out += '\n';
    out += print_system(s.after, sig);
  }
  return out;
}

}  // namespace alba
