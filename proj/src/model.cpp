#include "alba/model.hpp"

#include <functional>
#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace alba {

namespace {

long ipow(int b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int tuple_index(int size, const Tuple& args) {
  int idx = 0;
  for (int i = (int)args.size() - 1; i >= 0; --i) idx = idx * size + args[i];
  return idx;
}

// Mixed-radix increment, least significant coordinate first; false on wrap.
bool next_tuple(Tuple& t, int size) {
  for (int& x : t) {
    if (++x < size) return true;
    x = 0;
  }
  return false;
}

std::string show_tuple(const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i]);
  }
  return out + ")";
}

// The coordinate value acting as the empty join/meet on an f/g coordinate.
int eps_bottom(const FiniteLE& m, Pol p) {
  return p == Pol::One ? m.bot : m.top;
}
int eps_top(const FiniteLE& m, Pol p) {
  return p == Pol::One ? m.top : m.bot;
}

bool le_eps(const FiniteLE& m, const OrderType& eps, const Tuple& a,
            const Tuple& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    bool ok = eps[i] == Pol::One ? m.le(a[i], b[i]) : m.le(b[i], a[i]);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

int FiniteLE::apply(const std::string& conn, const Tuple& args) const {
  auto it = ops.find(conn);
  if (it == ops.end()) throw ModelError("no table for connective " + conn);
  return it->second[tuple_index(size, args)];
}

FiniteLE build_lattice(int size, const std::vector<std::pair<int, int>>& rel) {
  if (size <= 0) throw ModelError("lattice must be nonempty");
  FiniteLE m;
  m.size = size;
  m.leq.assign(size, std::vector<bool>(size, false));
  for (int i = 0; i < size; ++i) m.leq[i][i] = true;
  for (auto& [a, b] : rel) {
    if (a < 0 || a >= size || b < 0 || b >= size)
      throw ModelError("leq element out of range");
    m.leq[a][b] = true;
  }
  for (int k = 0; k < size; ++k)
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (m.leq[i][k] && m.leq[k][j]) m.leq[i][j] = true;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (i != j && m.leq[i][j] && m.leq[j][i])
        throw ModelError("order is not antisymmetric at " + std::to_string(i) +
                         "," + std::to_string(j));

  auto bound = [&](int a, int b, bool lower) -> int {
    int best = -1;
    for (int c = 0; c < size; ++c) {
      bool cand = lower ? m.leq[c][a] && m.leq[c][b]
                        : m.leq[a][c] && m.leq[b][c];
      if (!cand) continue;
      if (best == -1)
        best = c;
      else if (lower ? m.leq[best][c] : m.leq[c][best])
        best = c;
    }
    if (best == -1) return -1;
    // best must dominate every other candidate, not just the ones seen after
    // it, so re-check.
    for (int c = 0; c < size; ++c) {
      bool cand = lower ? m.leq[c][a] && m.leq[c][b]
                        : m.leq[a][c] && m.leq[b][c];
      if (cand && !(lower ? m.leq[c][best] : m.leq[best][c])) return -1;
    }
    return best;
  };

  m.meet.assign(size, std::vector<int>(size, 0));
  m.join.assign(size, std::vector<int>(size, 0));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      int g = bound(a, b, true), l = bound(a, b, false);
      if (g < 0 || l < 0)
        throw ModelError("not a lattice: no glb/lub for " + std::to_string(a) +
                         "," + std::to_string(b));
      m.meet[a][b] = g;
      m.join[a][b] = l;
    }
  m.bot = 0;
  m.top = 0;
  for (int c = 0; c < size; ++c) {
    m.bot = m.meet[m.bot][c];
    m.top = m.join[m.top][c];
  }
  return m;
}

void validate_model(const FiniteLE& m, const Signature& sig) {
  for (const Connective& c : sig.connectives) {
    auto it = m.ops.find(c.name);
    if (it == m.ops.end()) continue;
    if ((long)it->second.size() != ipow(m.size, c.arity))
      throw ModelError("table size mismatch for " + c.name);
    for (int v : it->second)
      if (v < 0 || v >= m.size)
        throw ModelError("table value out of range for " + c.name);
    bool f_side = is_f_family(c.family);
    for (int i = 0; i < c.arity; ++i) {
      Pol e = c.eps[i];
      // Binary (non)preservation law in coordinate i, all contexts.
      Tuple t(c.arity, 0);
      do {
        for (int y = 0; y < m.size; ++y) {
          int x = t[i];
          Tuple tin = t, ty = t;
          ty[i] = y;
          bool inner_meet = f_side ? e == Pol::Partial : e == Pol::One;
          tin[i] = inner_meet ? m.mt(x, y) : m.jn(x, y);
          // f maps the coordinate meet (d) or join (1) to a join of values;
          // g dually to a meet.
          int lhs = m.apply(c.name, tin);
          int rhs = f_side ? m.jn(m.apply(c.name, t), m.apply(c.name, ty))
                           : m.mt(m.apply(c.name, t), m.apply(c.name, ty));
          if (lhs != rhs)
            throw ModelError("law violation for " + c.name + " coordinate " +
                             std::to_string(i + 1) + " at " + show_tuple(t) +
                             " with " + std::to_string(y));
        }
      } while (next_tuple(t, m.size));
      if (!is_regular(c.family)) {
        // Empty-case law: the eps-bottom of a coordinate forces the unit.
        Tuple t0(c.arity, 0);
        do {
          Tuple te = t0;
          te[i] = f_side ? eps_bottom(m, e) : eps_top(m, e);
          int want = f_side ? m.bot : m.top;
          if (m.apply(c.name, te) != want)
            throw ModelError("empty-case law violation for " + c.name +
                             " coordinate " + std::to_string(i + 1) + " at " +
                             show_tuple(te));
        } while (next_tuple(t0, m.size));
      }
    }
  }
}

namespace {

// Residual of `parent` in 1-based coordinate k, by brute-force extremum; the
// moved value sits at the defining coordinate of the residual's argument
// tuple. Verifies the adjunction biconditional before returning.
std::vector<int> residual_table(const FiniteLE& m, const Connective& parent,
                                int k, const std::string& who) {
  int idx = k - 1;
  bool f_side = is_f_family(parent.family);
  bool one = parent.eps[idx] == Pol::One;
  std::vector<int> table(ipow(m.size, parent.arity), -1);
  Tuple t(parent.arity, 0);
  do {
    int b = t[idx];
    std::vector<int> sat;
    for (int c0 = 0; c0 < m.size; ++c0) {
      Tuple pa = t;
      pa[idx] = c0;
      bool cond = f_side ? m.le(m.apply(parent.name, pa), b)
                         : m.le(b, m.apply(parent.name, pa));
      if (cond) sat.push_back(c0);
    }
    // f eps=1 and g eps=d take the maximum of the satisfying set, the other
    // two cases the minimum.
    bool take_join = (f_side && one) || (!f_side && !one);
    int ext = take_join ? m.bot : m.top;
    for (int c0 : sat) ext = take_join ? m.jn(ext, c0) : m.mt(ext, c0);
    if (sat.empty() ||
        std::find(sat.begin(), sat.end(), ext) == sat.end())
      throw ModelError("adjoint missing for " + who + " at " + show_tuple(t));
    table[tuple_index(m.size, t)] = ext;
  } while (next_tuple(t, m.size));
  return table;
}

std::vector<int> normalization_table(const FiniteLE& m,
                                     const Connective& parent) {
  bool f_side = is_f_family(parent.family);
  bool one = parent.eps[0] == Pol::One;
  std::vector<int> table(m.size);
  for (int u = 0; u < m.size; ++u) {
    int guard = f_side == one ? m.bot : m.top;  // dia/trr cut at bot, box/tri at top
    if (u == guard)
      table[u] = f_side ? m.bot : m.top;
    else
      table[u] = m.apply(parent.name, {u});
  }
  return table;
}

}  // namespace

FiniteLE interpret_expanded(const FiniteLE& m, const Signature& expanded) {
  FiniteLE out = m;
  // Declaration order puts parents before their residuals and normalizations
  // before their black adjoints.
  for (const Connective& c : expanded.connectives) {
    if (out.ops.count(c.name)) continue;
    switch (c.origin) {
      case OriginKind::Base:
        throw ModelError("no table for base connective " + c.name);
      case OriginKind::Normalization:
        out.ops[c.name] = normalization_table(out, expanded.at(c.parent));
        break;
      case OriginKind::Residual:
      case OriginKind::Adjoint:
        out.ops[c.name] =
            residual_table(out, expanded.at(c.parent), c.coord, c.name);
        break;
    }
  }
  if (!adjunction_biconditionals(out, expanded))
    throw ModelError("computed residual fails its biconditional");
  return out;
}

int eval(const TermPtr& t, const FiniteLE& m, const Assignment& a) {
  auto atom = [&](const std::string& key) {
    auto it = a.at.find(key);
    if (it == a.at.end()) throw ModelError("unbound atom " + key);
    return it->second;
  };
  switch (t->kind) {
    case Kind::Var:
      return atom(t->name);
    case Kind::Nom:
      return atom("#" + t->name);
    case Kind::Conom:
      return atom("@" + t->name);
    case Kind::Top:
      return m.top;
    case Kind::Bot:
      return m.bot;
    case Kind::Meet:
      return m.mt(eval(t->args[0], m, a), eval(t->args[1], m, a));
    case Kind::Join:
      return m.jn(eval(t->args[0], m, a), eval(t->args[1], m, a));
    case Kind::App: {
      Tuple args;
      for (const TermPtr& s : t->args) args.push_back(eval(s, m, a));
      return m.apply(t->name, args);
    }
  }
  throw ModelError("unreachable");
}

namespace {

void collect_keys(const TermPtr& t, std::set<std::string>& out) {
  for (const std::string& v : variables(t)) out.insert(v);
  for (const std::string& j : nominals(t)) out.insert("#" + j);
  for (const std::string& mm : conominals(t)) out.insert("@" + mm);
}

}  // namespace

std::vector<std::string> atom_keys(const Inequality& iq) {
  std::set<std::string> s;
  collect_keys(iq.lhs, s);
  collect_keys(iq.rhs, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> atom_keys(const QuasiInequality& q) {
  std::set<std::string> s;
  for (const Inequality& iq : q.members) {
    collect_keys(iq.lhs, s);
    collect_keys(iq.rhs, s);
  }
  collect_keys(q.goal.lhs, s);
  collect_keys(q.goal.rhs, s);
  return {s.begin(), s.end()};
}

namespace {

// Enumerates assignments over `keys` in mixed-radix order (first key least
// significant) and reports the first failure of `holds`.
template <typename Pred>
ValidityReport sweep(const std::vector<std::string>& keys, const FiniteLE& m,
                     Pred holds) {
  ValidityReport r;
  Tuple vals(keys.size(), 0);
  while (true) {
    Assignment a;
    for (size_t i = 0; i < keys.size(); ++i) a.at[keys[i]] = vals[i];
    ++r.assignments;
    if (!holds(a)) {
      r.valid = false;
      r.counterexample = a;
      return r;
    }
    if (!next_tuple(vals, m.size)) break;
  }
  r.valid = true;
  return r;
}

}  // namespace

ValidityReport check_validity(const Inequality& iq, const FiniteLE& m) {
  return sweep(atom_keys(iq), m, [&](const Assignment& a) {
    return m.le(eval(iq.lhs, m, a), eval(iq.rhs, m, a));
  });
}

namespace {

std::string atom_key_of(const TermPtr& t) {
  if (t->kind == Kind::Var) return t->name;
  if (t->kind == Kind::Nom) return "#" + t->name;
  if (t->kind == Kind::Conom) return "@" + t->name;
  return {};
}

TermPtr subst_atom(const TermPtr& t, const std::string& key,
                   const TermPtr& r) {
  if (atom_key_of(t) == key && !atom_key_of(t).empty()) return r;
  if (t->args.empty()) return t;
  std::vector<TermPtr> args;
  bool touched = false;
  for (const TermPtr& c : t->args) {
    args.push_back(subst_atom(c, key, r));
    touched = touched || args.back() != c;
  }
  if (!touched) return t;
  if (t->kind == Kind::Meet) return meet(args[0], args[1]);
  if (t->kind == Kind::Join) return join(args[0], args[1]);
  return app(t->name, args);
}

// Per-coordinate value directions of an operation table, read off the model
// itself: mono means raising the coordinate never lowers the value.
struct CoordDir {
  bool mono = true, anti = true;
};

using DirCache = std::map<std::string, std::vector<CoordDir>>;

const std::vector<CoordDir>& coord_dirs(const FiniteLE& m,
                                        const std::string& conn, int arity,
                                        DirCache& cache) {
  auto it = cache.find(conn);
  if (it != cache.end()) return it->second;
  std::vector<CoordDir> dirs(arity);
  Tuple t(arity, 0);
  do {
    for (int i = 0; i < arity; ++i) {
      int va = m.apply(conn, t);
      for (int y = 0; y < m.size; ++y) {
        if (!m.le(t[i], y) || t[i] == y) continue;
        Tuple ty = t;
        ty[i] = y;
        int vb = m.apply(conn, ty);
        if (!m.le(va, vb)) dirs[i].mono = false;
        if (!m.le(vb, va)) dirs[i].anti = false;
      }
    }
  } while (next_tuple(t, m.size));
  return cache.emplace(conn, std::move(dirs)).first->second;
}

// sign: +1 raising the atom raises the subterm value, -1 lowers, 0 mixed.
void occ_walk(const TermPtr& t, const std::string& key, int sign,
              const FiniteLE& m, DirCache& cache, bool& up, bool& down) {
  std::string k = atom_key_of(t);
  if (!k.empty()) {
    if (k != key) return;
    if (sign >= 0) up = true;
    if (sign <= 0) down = true;
    return;
  }
  if (t->kind == Kind::Top || t->kind == Kind::Bot) return;
  if (t->kind == Kind::Meet || t->kind == Kind::Join) {
    occ_walk(t->args[0], key, sign, m, cache, up, down);
    occ_walk(t->args[1], key, sign, m, cache, up, down);
    return;
  }
  const std::vector<CoordDir>& dirs =
      coord_dirs(m, t->name, (int)t->args.size(), cache);
  for (size_t i = 0; i < t->args.size(); ++i) {
    if (dirs[i].mono && dirs[i].anti) continue;  // constant coordinate
    int child = dirs[i].mono ? sign : dirs[i].anti ? -sign : 0;
    occ_walk(t->args[i], key, child, m, cache, up, down);
  }
}

struct ReducedQuasi {
  std::vector<Inequality> members;
  Inequality goal;
};

// Shrinks the quantifier prefix with two validity-preserving moves, both
// justified by the coordinatewise monotonicity read off the model:
//  - an atom whose only member occurrences are bare upper (lower) bounds and
//    which the goal can only get harder for as it shrinks (grows) is replaced
//    by the meet (join) of its bounds;
//  - an atom the whole implication depends on monotonically is instantiated
//    at the hardest lattice constant.
ReducedQuasi reduce_quasi(const QuasiInequality& q, const FiniteLE& m,
                          DirCache& cache) {
  ReducedQuasi r{q.members, q.goal};
  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 256) {
    changed = false;
    QuasiInequality cur{r.members, r.goal};
    for (const std::string& key : atom_keys(cur)) {
      // Occurrence census over the members.
      std::vector<size_t> upper, lower;
      bool elsewhere = false;
      for (size_t i = 0; i < r.members.size(); ++i) {
        const Inequality& iq = r.members[i];
        bool u = false, d = false;
        if (atom_key_of(iq.lhs) == key) {
          occ_walk(iq.rhs, key, 1, m, cache, u, d);
          if (!u && !d) {
            upper.push_back(i);
            continue;
          }
        } else if (atom_key_of(iq.rhs) == key) {
          occ_walk(iq.lhs, key, 1, m, cache, u, d);
          if (!u && !d) {
            lower.push_back(i);
            continue;
          }
        }
        occ_walk(iq.lhs, key, 1, m, cache, u, d);
        occ_walk(iq.rhs, key, 1, m, cache, u, d);
        elsewhere = elsewhere || u || d;
      }
      bool gl_up = false, gl_down = false, gr_up = false, gr_down = false;
      occ_walk(r.goal.lhs, key, 1, m, cache, gl_up, gl_down);
      occ_walk(r.goal.rhs, key, 1, m, cache, gr_up, gr_down);

      auto drop_members = [&](const std::vector<size_t>& idx) {
        std::vector<Inequality> keep;
        for (size_t i = 0; i < r.members.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end())
            keep.push_back(r.members[i]);
        r.members = std::move(keep);
      };

      if (!upper.empty() && lower.empty() && !elsewhere && !gl_down &&
          !gr_up) {
        // Goal truth is antitone in the atom, so the binding case is the
        // meet of the upper bounds.
        std::vector<TermPtr> bounds;
        for (size_t i : upper) bounds.push_back(r.members[i].rhs);
        TermPtr psi = meet_all(bounds);
        drop_members(upper);
        for (Inequality& iq : r.members) {
          iq.lhs = subst_atom(iq.lhs, key, psi);
          iq.rhs = subst_atom(iq.rhs, key, psi);
        }
        r.goal.lhs = subst_atom(r.goal.lhs, key, psi);
        r.goal.rhs = subst_atom(r.goal.rhs, key, psi);
        changed = true;
        break;
      }
      if (!lower.empty() && upper.empty() && !elsewhere && !gl_up &&
          !gr_down) {
        std::vector<TermPtr> bounds;
        for (size_t i : lower) bounds.push_back(r.members[i].lhs);
        TermPtr psi = join_all(bounds);
        drop_members(lower);
        for (Inequality& iq : r.members) {
          iq.lhs = subst_atom(iq.lhs, key, psi);
          iq.rhs = subst_atom(iq.rhs, key, psi);
        }
        r.goal.lhs = subst_atom(r.goal.lhs, key, psi);
        r.goal.rhs = subst_atom(r.goal.rhs, key, psi);
        changed = true;
        break;
      }

      // Direction of the implication's truth in the atom, over every
      // occurrence: member lhs keeps the sign, member rhs and goal lhs flip,
      // goal rhs keeps it.
      bool inc = false, dec = false;
      for (size_t i = 0; i < r.members.size(); ++i) {
        occ_walk(r.members[i].lhs, key, 1, m, cache, inc, dec);
        occ_walk(r.members[i].rhs, key, -1, m, cache, inc, dec);
      }
      occ_walk(r.goal.lhs, key, -1, m, cache, inc, dec);
      occ_walk(r.goal.rhs, key, 1, m, cache, inc, dec);
      if (inc && dec) continue;
      TermPtr c = inc ? bot() : top();  // hardest value for a universal
      for (Inequality& iq : r.members) {
        iq.lhs = subst_atom(iq.lhs, key, c);
        iq.rhs = subst_atom(iq.rhs, key, c);
      }
      r.goal.lhs = subst_atom(r.goal.lhs, key, c);
      r.goal.rhs = subst_atom(r.goal.rhs, key, c);
      changed = true;
      break;
    }
  }
  return r;
}

// Terms compiled to a shared DAG evaluated incrementally along the
// assignment search: a node is recomputed exactly when the last atom below
// it receives a value.
struct QNode {
  int op = 0;  // 0 atom, 1 const, 2 meet, 3 join, 4 table
  int a = 0;   // atom slot or constant value
  const std::vector<int>* table = nullptr;
  std::vector<int> ch;
  int depth = 0;
};

struct QDag {
  const FiniteLE& m;
  std::vector<std::string> keys;
  std::map<std::string, int> slot;
  std::vector<QNode> nodes;
  std::map<std::string, int> memo;

  explicit QDag(const FiniteLE& mm) : m(mm) {}

  int build(const TermPtr& t) {
    std::string ak = atom_key_of(t);
    std::string sig;
    QNode n;
    if (!ak.empty()) {
      auto it = slot.find(ak);
      if (it == slot.end())
        it = slot.emplace(ak, (int)keys.size()).first, keys.push_back(ak);
      n.op = 0;
      n.a = it->second;
      n.depth = n.a + 1;
      sig = "a" + std::to_string(n.a);
    } else if (t->kind == Kind::Top || t->kind == Kind::Bot) {
      n.op = 1;
      n.a = t->kind == Kind::Top ? m.top : m.bot;
      sig = "c" + std::to_string(n.a);
    } else {
      n.op = t->kind == Kind::Meet ? 2 : t->kind == Kind::Join ? 3 : 4;
      sig = t->kind == Kind::App ? "f" + t->name : n.op == 2 ? "m" : "j";
      for (const TermPtr& c : t->args) {
        int id = build(c);
        n.ch.push_back(id);
        n.depth = std::max(n.depth, nodes[id].depth);
        sig += ":" + std::to_string(id);
      }
      if (n.op == 4) n.table = &m.ops.at(t->name);
    }
    auto it = memo.find(sig);
    if (it != memo.end()) return it->second;
    nodes.push_back(std::move(n));
    memo.emplace(sig, (int)nodes.size() - 1);
    return (int)nodes.size() - 1;
  }
};

}  // namespace

ValidityReport check_validity(const QuasiInequality& q, const FiniteLE& m) {
  DirCache dirs;
  ReducedQuasi red = reduce_quasi(q, m, dirs);

  // Members with few atoms first, so failed hypotheses prune the search as
  // early as possible; goal-only atoms come last.
  std::vector<std::vector<std::string>> matoms;
  for (const Inequality& iq : red.members) {
    std::set<std::string> s;
    collect_keys(iq.lhs, s);
    collect_keys(iq.rhs, s);
    matoms.emplace_back(s.begin(), s.end());
  }
  std::vector<size_t> morder(red.members.size());
  for (size_t i = 0; i < morder.size(); ++i) morder[i] = i;
  std::sort(morder.begin(), morder.end(), [&](size_t a, size_t b) {
    return matoms[a].size() < matoms[b].size();
  });

  QDag dag(m);
  for (size_t mi : morder)
    for (const std::string& k : matoms[mi])
      if (!dag.slot.count(k)) {
        dag.slot.emplace(k, (int)dag.keys.size());
        dag.keys.push_back(k);
      }
  std::vector<std::pair<int, int>> members;
  for (size_t mi : morder)
    members.emplace_back(dag.build(red.members[mi].lhs),
                         dag.build(red.members[mi].rhs));
  int goal_l = dag.build(red.goal.lhs);
  int goal_r = dag.build(red.goal.rhs);

  int K = (int)dag.keys.size();
  std::vector<std::vector<int>> schedule(K + 1);
  for (size_t id = 0; id < dag.nodes.size(); ++id)
    schedule[dag.nodes[id].depth].push_back((int)id);
  std::vector<std::vector<std::pair<int, int>>> mready(K + 1);
  for (auto& [l, r2] : members)
    mready[std::max(dag.nodes[l].depth, dag.nodes[r2].depth)].emplace_back(
        l, r2);
  int goal_depth = std::max(dag.nodes[goal_l].depth, dag.nodes[goal_r].depth);

  std::vector<int> vals(dag.nodes.size(), 0);
  std::vector<int> cur(K, 0);
  ValidityReport rep;
  rep.valid = true;

  std::function<bool(int)> dfs = [&](int d) -> bool {
    for (int id : schedule[d]) {
      const QNode& n = dag.nodes[id];
      switch (n.op) {
        case 0: vals[id] = cur[n.a]; break;
        case 1: vals[id] = n.a; break;
        case 2: vals[id] = m.mt(vals[n.ch[0]], vals[n.ch[1]]); break;
        case 3: vals[id] = m.jn(vals[n.ch[0]], vals[n.ch[1]]); break;
        default: {
          int idx = 0;
          for (int i = (int)n.ch.size() - 1; i >= 0; --i)
            idx = idx * m.size + vals[n.ch[i]];
          vals[id] = (*n.table)[idx];
        }
      }
    }
    for (auto& [l, r2] : mready[d])
      if (!m.le(vals[l], vals[r2])) return true;  // hypothesis fails
    if (goal_depth == d && m.le(vals[goal_l], vals[goal_r]))
      return true;  // goal settled; deeper atoms cannot touch it
    if (d == K) {
      ++rep.assignments;
      rep.valid = false;
      for (int i = 0; i < K; ++i) rep.counterexample.at[dag.keys[i]] = cur[i];
      return false;
    }
    for (int v = 0; v < m.size; ++v) {
      cur[d] = v;
      if (!dfs(d + 1)) return false;
    }
    return true;
  };
  dfs(0);
  return rep;
}

OracleVerdict equivalence_oracle(const Inequality& input,
                                 const std::vector<QuasiInequality>& output,
                                 const std::vector<FiniteLE>& models) {
  OracleVerdict v;
  for (const FiniteLE& m : models) {
    ValidityReport in = check_validity(input, m);
    v.assignments += in.assignments;
    bool out_valid = true;
    Assignment out_witness;
    for (const QuasiInequality& q : output) {
      ValidityReport r = check_validity(q, m);
      if (!r.valid) {
        out_valid = false;
        out_witness = r.counterexample;
        break;
      }
    }
    if (in.valid != out_valid) {
      v.equivalent = false;
      v.model_index = v.models;
      v.witness = in.valid ? out_witness : in.counterexample;
      v.detail = std::string("input ") + (in.valid ? "valid" : "invalid") +
                 ", output " + (out_valid ? "valid" : "invalid") + " on " +
                 m.name;
      v.models = (int)models.size();
      return v;
    }
    ++v.models;
  }
  return v;
}

bool sigma_pi_degeneracy(const FiniteLE& m, const Signature& sig) {
  for (const Connective& c : sig.connectives) {
    auto it = m.ops.find(c.name);
    if (it == m.ops.end()) continue;
    bool f_side = is_f_family(c.family);
    // First-stage extension on closed (resp. open) tuples, with closed =
    // open = carrier.
    std::vector<int> stage1(it->second.size());
    Tuple k(c.arity, 0);
    do {
      int acc = f_side ? m.top : m.bot;
      Tuple a(c.arity, 0);
      do {
        bool rel = f_side ? le_eps(m, c.eps, k, a) : le_eps(m, c.eps, a, k);
        if (rel) {
          int val = m.apply(c.name, a);
          acc = f_side ? m.mt(acc, val) : m.jn(acc, val);
        }
      } while (next_tuple(a, m.size));
      stage1[tuple_index(m.size, k)] = acc;
    } while (next_tuple(k, m.size));
    // Second stage over arbitrary tuples; both stages must reproduce the
    // original table on a finite lattice.
    Tuple u(c.arity, 0);
    do {
      int acc = f_side ? m.bot : m.top;
      Tuple kk(c.arity, 0);
      do {
        bool rel = f_side ? le_eps(m, c.eps, kk, u) : le_eps(m, c.eps, u, kk);
        if (rel) {
          int val = stage1[tuple_index(m.size, kk)];
          acc = f_side ? m.jn(acc, val) : m.mt(acc, val);
        }
      } while (next_tuple(kk, m.size));
      int orig = m.apply(c.name, u);
      if (acc != orig || stage1[tuple_index(m.size, u)] != orig) return false;
    } while (next_tuple(u, m.size));
  }
  return true;
}

bool quasi_perfect_laws(const FiniteLE& m, const Signature& sig) {
  for (const Connective& c : sig.connectives) {
    if (!m.ops.count(c.name)) continue;
    bool f_side = is_f_family(c.family);
    bool regular = is_regular(c.family);
    for (int i = 0; i < c.arity; ++i) {
      bool inner_join = f_side ? c.eps[i] == Pol::One : c.eps[i] == Pol::Partial;
      for (unsigned mask = regular ? 1 : 0; mask < (1u << m.size); ++mask) {
        int folded = inner_join ? m.bot : m.top;
        for (int x = 0; x < m.size; ++x)
          if (mask & (1u << x))
            folded = inner_join ? m.jn(folded, x) : m.mt(folded, x);
        Tuple t(c.arity, 0);
        do {
          Tuple tf = t;
          tf[i] = folded;
          int lhs = m.apply(c.name, tf);
          int rhs = f_side ? m.bot : m.top;
          for (int x = 0; x < m.size; ++x) {
            if (!(mask & (1u << x))) continue;
            Tuple tx = t;
            tx[i] = x;
            int val = m.apply(c.name, tx);
            rhs = f_side ? m.jn(rhs, val) : m.mt(rhs, val);
          }
          if (lhs != rhs) return false;
        } while (next_tuple(t, m.size));
      }
    }
  }
  return true;
}

bool normalization_identities(const FiniteLE& m, const Signature& expanded) {
  for (const Connective& c : expanded.connectives) {
    if (c.origin != OriginKind::Normalization || !m.ops.count(c.name))
      continue;
    const Connective& p = expanded.at(c.parent);
    bool f_side = is_f_family(p.family);
    int unit = m.apply(p.name, {p.eps[0] == Pol::One
                                    ? (f_side ? m.bot : m.top)
                                    : (f_side ? m.top : m.bot)});
    for (int u = 0; u < m.size; ++u) {
      int norm = m.apply(c.name, {u});
      int rebuilt = f_side ? m.jn(unit, norm) : m.mt(unit, norm);
      if (m.apply(p.name, {u}) != rebuilt) return false;
    }
  }
  return true;
}

bool adjunction_biconditionals(const FiniteLE& m, const Signature& expanded) {
  for (const Connective& c : expanded.connectives) {
    if (c.origin != OriginKind::Residual && c.origin != OriginKind::Adjoint)
      continue;
    if (!m.ops.count(c.name)) continue;
    const Connective& p = expanded.at(c.parent);
    int idx = c.coord - 1;
    bool f_side = is_f_family(p.family);
    bool one = p.eps[idx] == Pol::One;
    Tuple a(p.arity, 0);
    do {
      for (int b = 0; b < m.size; ++b) {
        bool cond1 = f_side ? m.le(m.apply(p.name, a), b)
                            : m.le(b, m.apply(p.name, a));
        Tuple ra = a;
        ra[idx] = b;
        int rv = m.apply(c.name, ra);
        // f eps=1: a_i <= f#(..b..); g eps=d: a_i <= gb(..b..); the other two
        // cases point the residual at the argument.
        bool arg_below = (f_side && one) || (!f_side && !one);
        bool cond2 = arg_below ? m.le(a[idx], rv) : m.le(rv, a[idx]);
        if (cond1 != cond2) return false;
      }
    } while (next_tuple(a, m.size));
  }
  return true;
}

std::vector<FiniteLE> enumerate_lattices(int max_size) {
  std::vector<FiniteLE> out;
  for (int n = 1; n <= max_size; ++n) {
    // Strict pairs (i,j), i<j; labels are forced to be a linear extension so
    // isomorphic copies differ only by a label permutation that stays upper
    // triangular.
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    int bits = (int)pairs.size();
    std::vector<int> perm(n);
    int count = 0;
    for (unsigned long mask = 0; mask < (1ul << bits); ++mask) {
      std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
      for (int b = 0; b < bits; ++b)
        if (mask & (1ul << b)) rel[pairs[b].first][pairs[b].second] = true;
      bool transitive = true;
      for (int i = 0; i < n && transitive; ++i)
        for (int j = i + 1; j < n && transitive; ++j)
          for (int k = j + 1; k < n; ++k)
            if (rel[i][j] && rel[j][k] && !rel[i][k]) {
              transitive = false;
              break;
            }
      if (!transitive) continue;
      // Canonical labeling: smallest mask over label permutations that keep
      // the order upper triangular.
      for (int i = 0; i < n; ++i) perm[i] = i;
      bool canonical = true;
      do {
        unsigned long pm = 0;
        bool ok = true;
        for (int b = 0; b < bits && ok; ++b) {
          if (!(mask & (1ul << b))) continue;
          int pi = perm[pairs[b].first], pj = perm[pairs[b].second];
          if (pi > pj) {
            ok = false;
            break;
          }
          int lo = pi, hi = pj;
          pm |= 1ul << (int)(std::find(pairs.begin(), pairs.end(),
                                       std::make_pair(lo, hi)) -
                             pairs.begin());
        }
        if (ok && pm < mask) {
          canonical = false;
          break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!canonical) continue;
      std::vector<std::pair<int, int>> edges;
      for (int b = 0; b < bits; ++b)
        if (mask & (1ul << b)) edges.push_back(pairs[b]);
      FiniteLE L;
      try {
        L = build_lattice(n, edges);
      } catch (const ModelError&) {
        continue;  // bounded-lattice check failed
      }
      L.name = "L" + std::to_string(n) + "-" + std::to_string(count++);
      out.push_back(std::move(L));
    }
  }
  return out;
}

namespace {

// Law-respecting table families. For f-connectives the value is bot whenever
// some coordinate sits at its eps-bottom; otherwise either the join of the
// 1-coordinates with a constant, or the constant alone. Both shapes satisfy
// every coordinatewise preservation law by construction. g-connectives are dual.
std::vector<int> normal_family_table(const FiniteLE& L, const Connective& c,
                                     bool fold_coords, int cparam) {
  bool f_side = is_f_family(c.family);
  std::vector<int> table(ipow(L.size, c.arity));
  Tuple t(c.arity, 0);
  do {
    bool degenerate = false;
    for (int i = 0; i < c.arity; ++i)
      if (t[i] == (f_side ? eps_bottom(L, c.eps[i]) : eps_top(L, c.eps[i])))
        degenerate = true;
    int v;
    if (degenerate) {
      v = f_side ? L.bot : L.top;
    } else {
      v = cparam;
      if (fold_coords)
        for (int i = 0; i < c.arity; ++i)
          if (c.eps[i] == Pol::One) v = f_side ? L.jn(v, t[i]) : L.mt(v, t[i]);
    }
    table[tuple_index(L.size, t)] = v;
  } while (next_tuple(t, L.size));
  return table;
}

std::vector<std::vector<int>> candidate_tables(const FiniteLE& L,
                                               const Connective& c) {
  std::vector<std::vector<int>> out;
  auto push = [&](std::vector<int> t) {
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(std::move(t));
  };
  Connective normal_shape = c;
  if (is_regular(c.family))
    normal_shape.family = is_f_family(c.family) ? Family::Fn : Family::Gn;
  std::vector<std::vector<int>> cores;
  for (bool fold : {true, false})
    for (int cp = 0; cp < L.size; ++cp)
      cores.push_back(normal_family_table(L, normal_shape, fold, cp));
  if (!is_regular(c.family)) {
    for (auto& t : cores) push(std::move(t));
  } else {
    // Regular = constant joined (f) or met (g) with a normal core; preserves
    // exactly the nonempty laws.
    bool f_side = is_f_family(c.family);
    for (const auto& core : cores)
      for (int shift = 0; shift < L.size; ++shift) {
        std::vector<int> t(core.size());
        for (size_t i = 0; i < core.size(); ++i)
          t[i] = f_side ? L.jn(shift, core[i]) : L.mt(shift, core[i]);
        push(std::move(t));
      }
  }
  return out;
}

}  // namespace

std::vector<FiniteLE> model_pool(const Signature& base, int max_size,
                                 int target, std::uint64_t seed) {
  std::vector<FiniteLE> lattices = enumerate_lattices(max_size);
  std::vector<std::vector<std::vector<std::vector<int>>>> choices;
  long combos_total = 0;
  for (const FiniteLE& L : lattices) {
    choices.emplace_back();
    long combos = 1;
    for (const Connective& c : base.connectives) {
      choices.back().push_back(candidate_tables(L, c));
      combos *= (long)choices.back().back().size();
    }
    combos_total += combos;
  }
  std::mt19937_64 rng(seed);
  std::vector<FiniteLE> pool;
  std::set<std::pair<size_t, std::vector<std::vector<int>>>> seen;
  long attempts = 0;
  while ((long)pool.size() < std::min((long)target, combos_total) &&
         attempts < 200L * target) {
    ++attempts;
    size_t li = rng() % lattices.size();
    std::vector<std::vector<int>> pick;
    for (size_t ci = 0; ci < base.connectives.size(); ++ci) {
      const auto& cand = choices[li][ci];
      pick.push_back(cand[rng() % cand.size()]);
    }
    if (!seen.insert({li, pick}).second) continue;
    FiniteLE m = lattices[li];
    for (size_t ci = 0; ci < base.connectives.size(); ++ci)
      m.ops[base.connectives[ci].name] = pick[ci];
    try {
      validate_model(m, base);
    } catch (const ModelError&) {
      continue;  // defensive: the families are valid by construction
    }
    m.name = lattices[li].name + "#" + std::to_string(pool.size());
    pool.push_back(std::move(m));
  }
  return pool;
}

FiniteLE parse_model_text(const std::string& text, const Signature& sig) {
  std::istringstream in(text);
  std::string line;
  int size = -1;
  std::vector<std::pair<int, int>> rel;
  struct OpLine {
    std::string name;
    Tuple args;
    int value;
  };
  std::vector<OpLine> oplines;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto bad = [&](const std::string& why) {
      throw ModelError("model line " + std::to_string(lineno) + ": " + why);
    };
    if (head == "size") {
      if (!(ls >> size) || size <= 0) bad("expected positive size");
    } else if (head == "leq") {
      int a, b;
      if (!(ls >> a >> b)) bad("expected two elements");
      rel.emplace_back(a, b);
    } else if (head == "op") {
      OpLine o;
      if (!(ls >> o.name)) bad("expected connective name");
      const Connective* c = sig.find(o.name);
      if (!c) {
        bad("unknown connective " + o.name);
        continue;
      }
      for (int i = 0; i < c->arity; ++i) {
        int x;
        if (!(ls >> x)) bad("expected " + std::to_string(c->arity) + " args");
        o.args.push_back(x);
      }
      std::string eq;
      if (!(ls >> eq) || eq != "=") bad("expected '='");
      if (!(ls >> o.value)) bad("expected value");
      oplines.push_back(std::move(o));
    } else {
      bad("unknown directive " + head);
    }
  }
  if (size < 0) throw ModelError("model file missing size line");
  FiniteLE m = build_lattice(size, rel);
  for (const Connective& c : sig.connectives)
    if (c.origin == OriginKind::Base)
      m.ops[c.name].assign(ipow(size, c.arity), -1);
  for (const OpLine& o : oplines) {
    for (int x : o.args)
      if (x < 0 || x >= size) throw ModelError("op arg out of range for " + o.name);
    if (o.value < 0 || o.value >= size)
      throw ModelError("op value out of range for " + o.name);
    auto& table = m.ops[o.name];
    if (table.empty())  // generated connective supplied explicitly
      table.assign(ipow(size, sig.at(o.name).arity), -1);
    table[tuple_index(size, o.args)] = o.value;
  }
  for (auto& [name, table] : m.ops)
    for (int v : table)
      if (v < 0) throw ModelError("incomplete table for " + name);
  validate_model(m, sig);
  return m;
}

FiniteLE parse_model_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  FiniteLE m = parse_model_text(buf.str(), sig);
  m.name = path;
  return m;
}

}  // namespace alba
