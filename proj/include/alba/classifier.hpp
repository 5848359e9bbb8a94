#ifndef ALBA_CLASSIFIER_HPP
#define ALBA_CLASSIFIER_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alba/gen_tree.hpp"

namespace alba {

class ClassifierError : public std::runtime_error {
 public:
  explicit ClassifierError(const std::string& what)
      : std::runtime_error(what) {}
};

using OmegaPair = std::pair<std::string, std::string>;  // first <_Omega second

struct Certificate {
  EpsMap eps;
  std::set<OmegaPair> omega;  // strict order: irreflexive, transitive
};

bool omega_less(const Certificate& c, const std::string& a,
                const std::string& b);

// Irreflexive + transitive, and every pair mentions covered variables only.
bool omega_well_formed(const Certificate& c);

struct SrrCheck {
  Path node;       // SRR node on a critical branch
  int coord = 0;   // 1-based side-formula coordinate checked
  bool in_lhs = true;
  std::vector<OmegaPair> constraints;  // p_k < critical variable
};

struct Verdict {
  bool holds = false;
  std::string failure;  // first violated condition, empty on success
  std::vector<BranchReport> branches;
  std::vector<SrrCheck> srr_checks;
};

// Inductive: every eps-critical branch of +lhs and -rhs is good, and each SRR
// node on a critical branch has side formulas gamma_h with eps^d(gamma_h)
// agreeing and all their variables strictly Omega-below the critical one.
Verdict is_inductive(const Inequality& iq, const Signature& sig,
                     const Certificate& cert);

// Sahlqvist: every eps-critical branch is excellent.
Verdict is_sahlqvist(const Inequality& iq, const Signature& sig,
                     const EpsMap& eps);

// Same conditions scoped to one signed tree; used on system members where
// criticality is evaluated against the tree's own root sign.
Verdict is_inductive_tree(const TermPtr& t, bool positive,
                          const Signature& sig, const Certificate& cert);

// Enumerates eps lexicographically over the variables in sorted order, with
// d before 1 in each position; Omega is the transitive closure of exactly
// the constraints harvested from the SRR side conditions. First acyclic hit wins.
std::optional<Certificate> find_inductive_certificate(const Inequality& iq,
                                                      const Signature& sig,
                                                      int max_vars = 16);

// Definite: no Delta-adjoint in P2 of any critical branch.
// Requires is_inductive(iq, cert) to hold.
bool is_definite(const Inequality& iq, const Signature& sig,
                 const Certificate& cert);

std::string print_certificate(const Certificate& cert);

}  // namespace alba

#endif
