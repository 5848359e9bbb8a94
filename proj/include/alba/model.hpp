#ifndef ALBA_MODEL_HPP
#define ALBA_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alba/term.hpp"

namespace alba {

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

using Tuple = std::vector<int>;

// A finite bounded lattice with operation tables. Finite lattices are
// complete and dense+compact in themselves, so such a structure is its own
// canonical extension: closed and open elements are the whole carrier, and
// nominals/conominals range over every element.
struct FiniteLE {
  int size = 0;
  std::vector<std::vector<bool>> leq;   // reflexive partial order
  std::vector<std::vector<int>> meet;   // binary glb table
  std::vector<std::vector<int>> join;   // binary lub table
  int bot = 0;
  int top = 0;
  // Operation tables in mixed-radix layout: entry for args a1..ak lives at
  // a1 + a2*size + a3*size^2 + ...
  std::map<std::string, std::vector<int>> ops;
  std::string name;  // provenance label for reports

  bool le(int a, int b) const { return leq[a][b]; }
  int mt(int a, int b) const { return meet[a][b]; }
  int jn(int a, int b) const { return join[a][b]; }
  int apply(const std::string& conn, const Tuple& args) const;
};

// Builds the order from an explicit relation (reflexive-transitive closure is
// taken) and derives meet/join/bot/top. Throws when some pair lacks a glb or
// lub, or the order is not antisymmetric.
FiniteLE build_lattice(int size, const std::vector<std::pair<int, int>>& rel);

// Exhaustively checks every coordinatewise preservation/reversal law for every
// connective of `sig` that has a table in `m`: normal connectives must also
// satisfy the empty-join/meet laws, regular ones only the nonempty versions.
// Throws ModelError carrying a concrete witness tuple on violation.
void validate_model(const FiniteLE& m, const Signature& sig);

// Fills in tables for every generated connective of the expanded signature:
// residuals by brute-force extremum, normalizations by the bottom/top case
// split, black adjoints as residuals of the normalizations. Every computed
// table is re-verified against its defining biconditional.
FiniteLE interpret_expanded(const FiniteLE& m, const Signature& expanded);

struct Assignment {
  // Keyed by atom rendering: "p" for variables, "#j" / "@m" for nominals and
  // conominals. All three sorts range over the full carrier.
  std::map<std::string, int> at;
};

int eval(const TermPtr& t, const FiniteLE& m, const Assignment& a);

struct QuasiInequality {
  std::vector<Inequality> members;
  Inequality goal;
};

std::vector<std::string> atom_keys(const Inequality& iq);
std::vector<std::string> atom_keys(const QuasiInequality& q);

struct ValidityReport {
  bool valid = false;
  long assignments = 0;  // number of assignments enumerated
  // Set when !valid. For a plain inequality this is the first failure in
  // mixed-radix order; for a quasi-inequality the search order is
  // deterministic but member-driven, so it is just some failure.
  Assignment counterexample;
};

ValidityReport check_validity(const Inequality& iq, const FiniteLE& m);
ValidityReport check_validity(const QuasiInequality& q, const FiniteLE& m);

struct OracleVerdict {
  bool equivalent = true;
  long assignments = 0;  // input-side assignments across all models
  int models = 0;
  int model_index = -1;   // discriminating model when !equivalent
  Assignment witness;     // counter-assignment on the failing side
  std::string detail;
};

// Checks, model by model, that the input inequality and the conjunction of
// the output quasi-inequalities have the same validity status.
OracleVerdict equivalence_oracle(const Inequality& input,
                                 const std::vector<QuasiInequality>& output,
                                 const std::vector<FiniteLE>& models);

// sigma-extension of f-tables and pi-extension of g-tables computed literally
// with closed = open = carrier; on a finite lattice both fix the table.
bool sigma_pi_degeneracy(const FiniteLE& m, const Signature& sig);

// The infinitary coordinatewise distribution laws, instantiated over every
// subset of the carrier (nonempty subsets for regular connectives).
bool quasi_perfect_laws(const FiniteLE& m, const Signature& sig);

// f(u) = f(bot) v dia_f(u) and the three order-variants, table-wise.
bool normalization_identities(const FiniteLE& m, const Signature& expanded);

// Every residuation/adjunction biconditional of the expanded signature, on
// all tuples.
bool adjunction_biconditionals(const FiniteLE& m, const Signature& expanded);

// All bounded lattices with at most max_size elements, up to isomorphism,
// without operation tables. Sizes 1..6 give 1,1,1,2,5,15 lattices.
std::vector<FiniteLE> enumerate_lattices(int max_size);

// A deterministic pool of validated lattice expansions over the base
// signature: enumerated lattice shapes crossed with law-respecting table
// families, sampled by the seed until `target` models are collected.
std::vector<FiniteLE> model_pool(const Signature& base, int max_size,
                                 int target, std::uint64_t seed);

// Model file: `size <n>`, `leq <i> <j>` lines (closure taken), then
// `op <name> <args...> = <value>` lines, one entry per tuple.
FiniteLE parse_model_text(const std::string& text, const Signature& sig);
FiniteLE parse_model_file(const std::string& path, const Signature& sig);

}  // namespace alba

#endif
