#ifndef ALBA_CORPUS_HPP
#define ALBA_CORPUS_HPP

#include <cstdint>

#include "alba/engine.hpp"

namespace alba {

struct CorpusEntry {
  Signature sig;        // base signature the inequality is written over
  Inequality ineq;
  Certificate cert;     // the certificate the generator built the entry from
};

// Seeded generation of inductive inequalities: each entry is grown from a
// random order-type and dependency order by stacking a Skeleton region over
// PIA regions, with SRR side formulas drawn from strictly smaller variables.
// Every entry is replay-verified against its certificate before being
// returned. Signatures rotate through a fixed pool mixing all four families.
std::vector<CorpusEntry> generate_corpus(int count, std::uint64_t seed,
                                         int max_depth = 5, int max_vars = 4);

// The signature pool used by the generator, in rotation order.
std::vector<Signature> corpus_signatures();

struct CorpusReport {
  int total = 0;
  int successes = 0;
  int safe = 0;          // successful runs whose traces are safe
  int pivotal = 0;       // successful runs with all approximations pivotal
  int adequate = 0;      // adequacy + compact-appropriateness after each step
  int replayed = 0;      // traces that replay step for step
  std::vector<std::string> failures;  // printed inputs with reasons
  std::vector<RunResult> results;     // parallel to the entries
};

CorpusReport run_corpus(const std::vector<CorpusEntry>& entries,
                        const RunOptions& opt = {});

}  // namespace alba

#endif
