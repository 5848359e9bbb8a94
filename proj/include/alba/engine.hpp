#ifndef ALBA_ENGINE_HPP
#define ALBA_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "alba/classifier.hpp"

namespace alba {

class EngineError : public std::runtime_error {
 public:
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

struct TaggedInequality {
  Inequality ineq;
  // Set exactly when introduced as the leftmost output of a regular
  // residuation rule; protected under safe executions.
  bool side_condition = false;
  int id = 0;  // stable identity for safety bookkeeping
};

bool is_pure(const TaggedInequality& t);

struct System {
  std::vector<TaggedInequality> members;
  Inequality goal;
  int next_id = 1;
  int nom_counter = 0;    // fresh nominals j1, j2, ...
  int conom_counter = 0;  // fresh conominals m1, m2, ...

  int add_member(Inequality iq, bool side = false);
};

// One line per member (side conditions suffixed " [side]"), then the goal
// prefixed "|- ".
std::string print_system(const System& sys, const Signature& sig);

enum class ApproxFlavor { LPos, LNeg, RPos, RNeg };
std::string to_string(ApproxFlavor f);

enum class AckSide { Right, Left };

struct TraceStep {
  std::string rule;  // uniform-top|uniform-bot|approx-L+|approx-L-|approx-R+|
                     // approx-R-|split|residuate|regular-residuate|
                     // ackermann-right|ackermann-left|compress-res|compress-elim
  std::string at;    // path, member index, or variable, per rule
  Path path;
  int member = -1;
  int coord = 0;
  std::string var;
  bool pivotal = false;       // approximation steps only
  bool is_ackermann = false;
  std::vector<int> modified_ids;  // pre-existing members rewritten or removed
  System after;
};

struct Trace {
  System initial;
  std::vector<TraceStep> steps;
};

enum class RunStatus { Success, Failure };

struct RunResult {
  RunStatus status = RunStatus::Failure;
  std::string reason;
  std::optional<Certificate> cert;
  std::vector<System> systems;  // one per preprocessed inequality
  std::vector<Trace> traces;    // parallel to systems
};

// Stage 1: eliminate uniform variables, distribute over the lattice
// operations, split top-level meets/joins. Returns the resulting batch.
std::vector<Inequality> preprocess(const Inequality& iq, const Signature& sig);

// Displace the subterm at `path` in the goal side selected by the flavor with
// a fresh nominal (L+/R+) or conominal (L-/R-), recording j <= gamma or
// gamma <= m in S. The branch above the position must be SAC with matching
// signs; pivotal mode additionally demands maximality.
System apply_approximation(const System& sys, const Signature& sig,
                           ApproxFlavor flavor, const Path& path,
                           bool pivotal_mode);

// True when an approximation at this goal position would be pivotal.
bool approximation_pivotal(const System& sys, const Signature& sig,
                           ApproxFlavor flavor, const Path& path);

// Residuate member `index` at `coordinate`. Normal heads rewrite in place;
// regular heads produce the side condition plus the black-adjoint member.
System apply_residuation(const System& sys, const Signature& sig, int index,
                         int coordinate);

// Split member `index`: meet on the right or join on the left.
System apply_split(const System& sys, const Signature& sig, int index);

System apply_ackermann(const System& sys, const Signature& sig,
                       const std::string& v, AckSide side);

// Residuate the goal at the head of one side (used by the compression
// phase); normal heads only.
System apply_goal_residuation(const System& sys, const Signature& sig,
                              bool rhs_head, int coordinate);

bool is_ackermann_ready(const System& sys, const Signature& sig,
                        const std::string& v, Pol eps_v);
bool is_stripped(const System& sys, const Signature& sig,
                 const Certificate& cert);

bool check_topological_adequacy(const System& sys, const Signature& sig);
bool check_compact_appropriate(const System& sys, const Signature& sig);
bool check_safety(const Trace& trace);

// Re-applies every step of the trace from its initial system and compares
// against the recorded intermediate systems.
bool replay_trace(const Trace& trace, const Signature& sig);

struct RunOptions {
  bool pivotal = true;
  int depth = 64;  // EXHAUSTIVE rule budget per system
};

RunResult run_strategic(const Inequality& iq, const Signature& sig,
                        const RunOptions& opt = {});
RunResult run_exhaustive(const Inequality& iq, const Signature& sig,
                         const RunOptions& opt = {});

// `FORALL <vars> : <member> & ... => <goal>`; members sorted by printed form,
// the quantifier list covers the nominals and conominals of the system.
std::string print_quasi_inequality(const System& sys, const Signature& sig);

std::string print_trace(const Trace& trace, const Signature& sig);

}  // namespace alba

#endif
