#include "alba/gen_tree.hpp"

#include <algorithm>

namespace alba {

std::string path_to_string(const Path& p) {
  if (p.empty()) return "-";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

std::string to_string(NodeClass c) {
  switch (c) {
    case NodeClass::DeltaAdjoint: return "delta-adjoint";
    case NodeClass::SAC: return "sac";
    case NodeClass::SRR: return "srr";
    case NodeClass::SMP: return "smp";
    case NodeClass::Leaf: return "leaf";
  }
  return "?";
}

bool is_skeleton(NodeClass c) {
  return c == NodeClass::DeltaAdjoint || c == NodeClass::SAC;
}

bool is_pia(NodeClass c) { return c == NodeClass::SMP || c == NodeClass::SRR; }

bool sac_admissible(const SignedNode& n) {
  return n.cls == NodeClass::SAC || n.also_sac;
}

namespace {

// Taxonomy: +v/-^ are Delta-adjoints, +f/-g are SAC, +^ / unary +g / -v /
// unary -f are SMP, n>=2 +g / -f are SRR.
void classify(SignedNode& n, const Signature& sig) {
  n.also_sac = false;
  const TermPtr& t = n.term;
  switch (t->kind) {
    case Kind::Var:
    case Kind::Nom:
    case Kind::Conom:
    case Kind::Top:
    case Kind::Bot:
      n.cls = NodeClass::Leaf;
      return;
    case Kind::Join:
      n.cls = n.positive ? NodeClass::DeltaAdjoint : NodeClass::SMP;
      break;
    case Kind::Meet:
      n.cls = n.positive ? NodeClass::SMP : NodeClass::DeltaAdjoint;
      break;
    case Kind::App: {
      const Connective& c = sig.at(t->name);
      if (c.arity == 0) {
        n.cls = NodeClass::Leaf;
        return;
      }
      bool sac_sign = is_f_family(c.family) == n.positive;
      if (sac_sign)
        n.cls = NodeClass::SAC;
      else
        n.cls = c.arity == 1 ? NodeClass::SMP : NodeClass::SRR;
      break;
    }
  }
  n.also_sac = n.cls == NodeClass::SMP;
}

void build(const TermPtr& t, bool positive, const Signature& sig, Path& path,
           std::vector<SignedNode>& out) {
  SignedNode n;
  n.path = path;
  n.positive = positive;
  n.term = t;
  classify(n, sig);
  out.push_back(std::move(n));
  for (size_t i = 0; i < t->args.size(); ++i) {
    bool child = positive;
    if (t->kind == Kind::App) {
      const Connective& c = sig.at(t->name);
      if (c.eps[i] == Pol::Partial) child = !positive;
    }
    path.push_back((int)i + 1);
    build(t->args[i], child, sig, path, out);
    path.pop_back();
  }
}

}  // namespace

const SignedNode* SignedTree::find(const Path& p) const {
  for (const SignedNode& n : nodes)
    if (n.path == p) return &n;
  return nullptr;
}

const SignedNode& SignedTree::at(const Path& p) const {
  const SignedNode* n = find(p);
  if (!n) throw std::runtime_error("no node at path " + path_to_string(p));
  return *n;
}

SignedTree build_signed_tree(const TermPtr& t, bool positive,
                             const Signature& sig) {
  SignedTree tree;
  tree.root = t;
  tree.root_positive = positive;
  Path path;
  build(t, positive, sig, path, tree.nodes);
  return tree;
}

std::string dump_tree(const SignedTree& tree, const Signature& sig) {
  std::string out;
  for (const SignedNode& n : tree.nodes) {
    std::string label;
    switch (n.term->kind) {
      case Kind::Var: label = n.term->name; break;
      case Kind::Nom: label = "#" + n.term->name; break;
      case Kind::Conom: label = "@" + n.term->name; break;
      case Kind::Top: label = "top"; break;
      case Kind::Bot: label = "bot"; break;
      case Kind::Meet: label = "/\\"; break;
      case Kind::Join: label = "\\/"; break;
      case Kind::App: label = n.term->name; break;
    }
    (void)sig;
    out += path_to_string(n.path);
    out += n.positive ? " + " : " - ";
    out += to_string(n.cls);
    out += ' ';
    out += label;
    out += '\n';
  }
  return out;
}

BranchReport analyze_branch(const SignedTree& tree, const Path& leaf) {
  const SignedNode& leafNode = tree.at(leaf);
  if (leafNode.cls != NodeClass::Leaf)
    throw NotALeaf("branch target is not a leaf: " + path_to_string(leaf));
  BranchReport r;
  r.leaf = leaf;
  // Ancestors from the leaf upward, leaf excluded.
  std::vector<const SignedNode*> up;
  Path p = leaf;
  while (!p.empty()) {
    p.pop_back();
    up.push_back(&tree.at(p));
  }
  size_t i = 0;
  while (i < up.size() && is_pia(up[i]->cls)) {
    r.p1_nodes.push_back(up[i]->path);
    ++i;
  }
  bool rest_skeleton = true, rest_sac = true;
  for (; i < up.size(); ++i) {
    r.p2_nodes.push_back(up[i]->path);
    rest_skeleton = rest_skeleton && is_skeleton(up[i]->cls);
    rest_sac = rest_sac && up[i]->cls == NodeClass::SAC;
  }
  r.good = rest_skeleton;
  bool p1_smp = std::all_of(
      r.p1_nodes.begin(), r.p1_nodes.end(),
      [&](const Path& q) { return tree.at(q).cls == NodeClass::SMP; });
  r.excellent = r.good && p1_smp;
  r.skeleton = r.good && r.p1_nodes.empty();
  r.definite_sac = r.good && rest_sac;
  return r;
}

std::optional<bool> uniform_sign(const Inequality& iq, const Signature& sig,
                                 const std::string& v) {
  Polarity l = polarity(iq.lhs, sig, v);
  Polarity r = polarity(iq.rhs, sig, v);
  // Signs in the -rhs tree are the flips of formula polarity in rhs.
  bool sawPos = l == Polarity::Positive || l == Polarity::Both ||
                r == Polarity::Negative || r == Polarity::Both;
  bool sawNeg = l == Polarity::Negative || l == Polarity::Both ||
                r == Polarity::Positive || r == Polarity::Both;
  if (sawPos == sawNeg) return std::nullopt;  // mixed or absent
  return sawPos;
}

std::optional<Pol> eps_lookup(const EpsMap& eps, const std::string& v) {
  for (const VarPolarity& e : eps)
    if (e.name == v) return e.pol;
  return std::nullopt;
}

bool is_critical_sign(bool positive, Pol p) {
  return positive == (p == Pol::One);
}

std::vector<CriticalOccurrence> critical_occurrences(const Inequality& iq,
                                                     const Signature& sig,
                                                     const EpsMap& eps) {
  std::vector<CriticalOccurrence> out;
  auto scan = [&](const TermPtr& side, bool positive, bool in_lhs) {
    SignedTree tree = build_signed_tree(side, positive, sig);
    for (const SignedNode& n : tree.nodes) {
      if (n.term->kind != Kind::Var) continue;
      auto p = eps_lookup(eps, n.term->name);
      if (!p) continue;
      if (is_critical_sign(n.positive, *p))
        out.push_back({n.term->name, in_lhs, n.path, n.positive});
    }
  };
  scan(iq.lhs, true, true);
  scan(iq.rhs, false, false);
  return out;
}

}  // namespace alba
