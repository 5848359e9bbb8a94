#include "alba/classifier.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace alba {

bool omega_less(const Certificate& c, const std::string& a,
                const std::string& b) {
  // Reachability, so callers may pass a generating set; a stored certificate
  // is transitively closed and hits on the first hop.
  std::set<std::string> seen;
  std::deque<std::string> work{a};
  while (!work.empty()) {
    std::string cur = work.front();
    work.pop_front();
    for (const OmegaPair& e : c.omega) {
      if (e.first != cur) continue;
      if (e.second == b) return true;
      if (seen.insert(e.second).second) work.push_back(e.second);
    }
  }
  return false;
}

bool omega_well_formed(const Certificate& c) {
  for (const OmegaPair& e : c.omega) {
    if (e.first == e.second) return false;
    if (!eps_lookup(c.eps, e.first) || !eps_lookup(c.eps, e.second))
      return false;
    for (const OmegaPair& f : c.omega)
      if (f.first == e.second && !c.omega.count({e.first, f.second}))
        return false;
  }
  for (const VarPolarity& v : c.eps)
    if (c.omega.count({v.name, v.name})) return false;
  return true;
}

namespace {

struct CheckCtx {
  const Signature& sig;
  const EpsMap& eps;
  // Exactly one of these is set: check against omega, or harvest the pairs
  // the dependency side conditions would demand.
  const Certificate* cert = nullptr;
  std::set<OmegaPair>* harvest = nullptr;
  bool require_excellent = false;
  Verdict* v = nullptr;
};

std::vector<const SignedNode*> subtree_nodes(const SignedTree& tree,
                                             const Path& root) {
  std::vector<const SignedNode*> out;
  for (const SignedNode& n : tree.nodes) {
    if (n.path.size() < root.size()) continue;
    if (std::equal(root.begin(), root.end(), n.path.begin()))
      out.push_back(&n);
  }
  return out;
}

bool fail(CheckCtx& cx, const std::string& why) {
  if (cx.v && cx.v->failure.empty()) cx.v->failure = why;
  return false;
}

// Side-formula conditions at one SRR ancestor of a critical leaf.
bool check_srr_node(CheckCtx& cx, const SignedTree& tree, const Path& node,
                    int branch_coord, const std::string& crit_var,
                    bool in_lhs) {
  const SignedNode& srr = tree.at(node);
  int arity = (int)srr.term->args.size();
  for (int h = 1; h <= arity; ++h) {
    if (h == branch_coord) continue;
    SrrCheck sc;
    sc.node = node;
    sc.coord = h;
    sc.in_lhs = in_lhs;
    Path side = node;
    side.push_back(h);
    for (const SignedNode* n : subtree_nodes(tree, side)) {
      if (n->term->kind != Kind::Var) continue;
      const std::string& pk = n->term->name;
      auto e = eps_lookup(cx.eps, pk);
      if (!e)
        throw ClassifierError("uncovered variable in side formula: " + pk);
      // 2(a): the side formula must be uniformly eps^d-critical in its leaves.
      if (!is_critical_sign(n->positive, flip(*e)))
        return fail(cx, "side formula leaf not eps-dual-critical at " +
                            path_to_string(n->path));
      // 2(b): pk strictly below the critical variable.
      if (pk == crit_var)
        return fail(cx, "critical variable " + pk +
                            " occurs in its own side formula at " +
                            path_to_string(n->path));
      if (cx.harvest) {
        cx.harvest->insert({pk, crit_var});
      } else if (!omega_less(*cx.cert, pk, crit_var)) {
        return fail(cx, "missing order constraint " + pk + " < " + crit_var +
                            " at " + path_to_string(n->path));
      }
      sc.constraints.push_back({pk, crit_var});
    }
    if (cx.v) cx.v->srr_checks.push_back(std::move(sc));
  }
  return true;
}

bool check_tree(CheckCtx& cx, const TermPtr& t, bool positive, bool in_lhs) {
  SignedTree tree = build_signed_tree(t, positive, cx.sig);
  for (const SignedNode& n : tree.nodes) {
    if (n.term->kind != Kind::Var) continue;
    auto e = eps_lookup(cx.eps, n.term->name);
    if (!e) throw ClassifierError("uncovered variable: " + n.term->name);
    if (!is_critical_sign(n.positive, *e)) continue;
    BranchReport r = analyze_branch(tree, n.path);
    if (cx.v) cx.v->branches.push_back(r);
    if (!r.good)
      return fail(cx, "critical branch not good at " + path_to_string(n.path));
    if (cx.require_excellent) {
      if (!r.excellent)
        return fail(cx,
                    "critical branch not excellent at " + path_to_string(n.path));
      continue;  // excellent P1 is SMP-only, no SRR conditions arise
    }
    for (const Path& q : r.p1_nodes) {
      if (tree.at(q).cls != NodeClass::SRR) continue;
      int branch_coord = n.path[q.size()];
      if (!check_srr_node(cx, tree, q, branch_coord, n.term->name, in_lhs))
        return false;
    }
  }
  return true;
}

bool check_ineq(CheckCtx& cx, const Inequality& iq) {
  return check_tree(cx, iq.lhs, true, true) &&
         check_tree(cx, iq.rhs, false, false);
}

std::vector<std::string> sorted_vars(const Inequality& iq) {
  std::set<std::string> vs = variables(iq);
  return {vs.begin(), vs.end()};
}

bool has_cycle(const std::set<OmegaPair>& edges) {
  std::set<std::string> nodes;
  for (const OmegaPair& e : edges) {
    nodes.insert(e.first);
    nodes.insert(e.second);
  }
  for (const std::string& n : nodes) {
    Certificate probe;
    probe.omega = edges;
    if (omega_less(probe, n, n)) return true;
  }
  return false;
}

std::set<OmegaPair> transitive_closure(const std::set<OmegaPair>& edges) {
  std::set<OmegaPair> out = edges;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const OmegaPair& a : out)
      for (const OmegaPair& b : out)
        if (a.second == b.first && out.insert({a.first, b.second}).second)
          grew = true;
  }
  return out;
}

}  // namespace

Verdict is_inductive(const Inequality& iq, const Signature& sig,
                     const Certificate& cert) {
  Verdict v;
  if (!omega_well_formed(cert)) {
    v.failure = "omega is not an irreflexive transitive order over eps";
    return v;
  }
  CheckCtx cx{sig, cert.eps};
  cx.cert = &cert;
  cx.v = &v;
  v.holds = check_ineq(cx, iq);
  return v;
}

Verdict is_sahlqvist(const Inequality& iq, const Signature& sig,
                     const EpsMap& eps) {
  Verdict v;
  CheckCtx cx{sig, eps};
  Certificate empty;
  empty.eps = eps;
  cx.cert = &empty;
  cx.require_excellent = true;
  cx.v = &v;
  v.holds = check_ineq(cx, iq);
  return v;
}

Verdict is_inductive_tree(const TermPtr& t, bool positive,
                          const Signature& sig, const Certificate& cert) {
  Verdict v;
  if (!omega_well_formed(cert)) {
    v.failure = "omega is not an irreflexive transitive order over eps";
    return v;
  }
  CheckCtx cx{sig, cert.eps};
  cx.cert = &cert;
  cx.v = &v;
  v.holds = check_tree(cx, t, positive, positive);
  return v;
}

std::optional<Certificate> find_inductive_certificate(const Inequality& iq,
                                                      const Signature& sig,
                                                      int max_vars) {
  std::vector<std::string> vars = sorted_vars(iq);
  int n = (int)vars.size();
  if (n > max_vars)
    throw ClassifierError("too many variables: " + std::to_string(n));
  // Lexicographic over the sorted variables with d before 1 in each slot;
  // the first variable is the most significant digit.
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Certificate cand;
    for (int i = 0; i < n; ++i) {
      bool one = (mask >> (n - 1 - i)) & 1;
      cand.eps.push_back({vars[i], one ? Pol::One : Pol::Partial});
    }
    std::set<OmegaPair> harvested;
    CheckCtx cx{sig, cand.eps};
    cx.harvest = &harvested;
    if (!check_ineq(cx, iq)) continue;
    if (has_cycle(harvested)) continue;
    cand.omega = transitive_closure(harvested);
    return cand;
  }
  return std::nullopt;
}

bool is_definite(const Inequality& iq, const Signature& sig,
                 const Certificate& cert) {
  Verdict v = is_inductive(iq, sig, cert);
  if (!v.holds)
    throw ClassifierError("is_definite requires an inductive certificate: " +
                          v.failure);
  auto scan = [&](const TermPtr& t, bool positive) {
    SignedTree tree = build_signed_tree(t, positive, sig);
    for (const SignedNode& n : tree.nodes) {
      if (n.term->kind != Kind::Var) continue;
      auto e = eps_lookup(cert.eps, n.term->name);
      if (!e || !is_critical_sign(n.positive, *e)) continue;
      BranchReport r = analyze_branch(tree, n.path);
      for (const Path& q : r.p2_nodes)
        if (tree.at(q).cls == NodeClass::DeltaAdjoint) return false;
    }
    return true;
  };
  return scan(iq.lhs, true) && scan(iq.rhs, false);
}

std::string print_certificate(const Certificate& cert) {
  std::string out = "eps";
  for (const VarPolarity& v : cert.eps) {
    out += ' ';
    out += v.name;
    out += '=';
    out += v.pol == Pol::One ? '1' : 'd';
  }
  out += " omega";
  for (const OmegaPair& e : cert.omega) {
    out += ' ';
    out += e.first;
    out += '<';
    out += e.second;
  }
  return out;
}

}  // namespace alba
