#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "alba/corpus.hpp"
#include "alba/model.hpp"

using namespace alba;

TEST_CASE("generation is deterministic and certified") {
  auto a = generate_corpus(40, 11);
  auto b = generate_corpus(40, 11);
  REQUIRE(a.size() == 40);
  REQUIRE(b.size() == 40);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(equal(a[i].ineq, b[i].ineq));
    CHECK(is_inductive(a[i].ineq, a[i].sig, a[i].cert).holds);
  }
  auto c = generate_corpus(40, 12);
  bool differs = false;
  for (size_t i = 0; i < c.size(); ++i)
    differs = differs || !equal(a[i].ineq, c[i].ineq);
  CHECK(differs);
}

TEST_CASE("entries respect the stated bounds") {
  auto entries = generate_corpus(60, 5);
  std::function<int(const TermPtr&)> depth = [&](const TermPtr& t) {
    int d = 0;
    for (const TermPtr& s : t->args) d = std::max(d, depth(s));
    return d + 1;
  };
  bool saw_regular = false, saw_srr = false;
  for (const CorpusEntry& e : entries) {
    CHECK(variables(e.ineq).size() <= 4);
    CHECK(!variables(e.ineq).empty());
    CHECK(depth(e.ineq.lhs) <= 5);
    CHECK(depth(e.ineq.rhs) <= 5);
    for (const Connective& c : e.sig.connectives) {
      if (is_regular(c.family)) saw_regular = true;
      if (c.arity >= 2) saw_srr = true;
    }
  }
  CHECK(saw_regular);
  CHECK(saw_srr);
}

TEST_CASE("strategic runs succeed on a sample") {
  auto entries = generate_corpus(25, 99);
  CorpusReport rep = run_corpus(entries);
  CHECK(rep.total == 25);
  CHECK(rep.successes == 25);
  CHECK(rep.safe == 25);
  CHECK(rep.pivotal == 25);
  CHECK(rep.adequate == 25);
  CHECK(rep.replayed == 25);
  if (!rep.failures.empty()) {
    for (const std::string& f : rep.failures) MESSAGE(f);
  }
}

TEST_CASE("oracle agreement on a small sample") {
  auto entries = generate_corpus(6, 3);
  CorpusReport rep = run_corpus(entries);
  REQUIRE(rep.successes == 6);
  for (size_t i = 0; i < entries.size(); ++i) {
    Signature expanded = expand_signature(entries[i].sig);
    auto pool = model_pool(entries[i].sig, 3, 6, 17);
    std::vector<FiniteLE> models;
    for (const FiniteLE& m : pool)
      models.push_back(interpret_expanded(m, expanded));
    std::vector<QuasiInequality> out;
    for (const System& sys : rep.results[i].systems) {
      QuasiInequality q;
      for (const TaggedInequality& t : sys.members) q.members.push_back(t.ineq);
      q.goal = sys.goal;
      out.push_back(std::move(q));
    }
    OracleVerdict v = equivalence_oracle(entries[i].ineq, out, models);
    CHECK(v.equivalent);
    if (!v.equivalent) MESSAGE(v.detail);
  }
}
