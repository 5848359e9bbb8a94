#ifndef ALBA_GEN_TREE_HPP
#define ALBA_GEN_TREE_HPP

#include <optional>
#include <string>
#include <vector>

#include "alba/term.hpp"

namespace alba {

// Coordinate-index path from the root, 1-based per coordinate.
using Path = std::vector<int>;

std::string path_to_string(const Path& p);  // "-" for the root

// Node taxonomy. Skeleton = DeltaAdjoint | SAC, PIA = SMP | SRR.
enum class NodeClass { DeltaAdjoint, SAC, SRR, SMP, Leaf };

std::string to_string(NodeClass c);

struct SignedNode {
  Path path;
  bool positive = true;
  TermPtr term;
  NodeClass cls = NodeClass::Leaf;
  // SMP nodes also pass the SAC admissibility test used by the approximation
  // machinery; never set for any other class.
  bool also_sac = false;
};

bool is_skeleton(NodeClass c);
bool is_pia(NodeClass c);
bool sac_admissible(const SignedNode& n);

struct SignedTree {
  TermPtr root;
  bool root_positive = true;
  std::vector<SignedNode> nodes;  // preorder

  const SignedNode* find(const Path& p) const;
  const SignedNode& at(const Path& p) const;
};

SignedTree build_signed_tree(const TermPtr& t, bool positive,
                             const Signature& sig);

// One line per node: `path sign class label`.
std::string dump_tree(const SignedTree& tree, const Signature& sig);

struct BranchReport {
  Path leaf;
  bool good = false;
  bool excellent = false;
  bool skeleton = false;      // |P1| = 0
  bool definite_sac = false;  // P2 contains SAC nodes only
  // Ancestor paths from the leaf upward, split at the maximal PIA prefix.
  std::vector<Path> p1_nodes, p2_nodes;
};

class NotALeaf : public std::runtime_error {
 public:
  explicit NotALeaf(const std::string& what) : std::runtime_error(what) {}
};

BranchReport analyze_branch(const SignedTree& tree, const Path& leaf);

// Shared sign of all occurrences of v across +lhs and -rhs, if any occur and
// they agree; '+' encoded as true.
std::optional<bool> uniform_sign(const Inequality& iq, const Signature& sig,
                                 const std::string& v);

struct VarPolarity {
  std::string name;
  Pol pol;
};
using EpsMap = std::vector<VarPolarity>;  // order fixes output determinism

std::optional<Pol> eps_lookup(const EpsMap& eps, const std::string& v);

// A leaf +p with eps(p)=1 or -p with eps(p)=d.
bool is_critical_sign(bool positive, Pol p);

struct CriticalOccurrence {
  std::string var;
  bool in_lhs = true;
  Path path;
  bool positive = true;
};

std::vector<CriticalOccurrence> critical_occurrences(const Inequality& iq,
                                                     const Signature& sig,
                                                     const EpsMap& eps);

}  // namespace alba

#endif
