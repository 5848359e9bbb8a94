#include "alba/corpus.hpp"

#include <algorithm>

#include <random>

namespace alba {

namespace {

struct Gen {
  std::mt19937_64& rng;
  const Signature& sig;
  std::vector<std::string> vars;
  EpsMap eps;
  Certificate cert;  // transitively closed

  int pick(int n) { return (int)(rng() % (std::uint64_t)n); }
  bool coin(int percent) { return pick(100) < percent; }

  Pol eps_of(const std::string& v) { return *eps_lookup(eps, v); }

  std::vector<const Connective*> conns(bool f_side, int min_arity,
                                       int max_arity) {
    std::vector<const Connective*> out;
    for (const Connective& c : sig.connectives)
      if (is_f_family(c.family) == f_side && c.arity >= min_arity &&
          c.arity <= max_arity)
        out.push_back(&c);
    return out;
  }

  bool child_sign(bool sign, Pol e) {
    return e == Pol::One ? sign : !sign;
  }

  TermPtr constant(bool) { return coin(50) ? top() : bot(); }

  // A variable leaf that is not eps-critical at this sign never starts a
  // critical branch and is unconstrained.
  TermPtr noncritical_leaf(bool sign) {
    std::vector<std::string> ok;
    for (const std::string& v : vars)
      if (!is_critical_sign(sign, eps_of(v))) ok.push_back(v);
    if (ok.empty() || coin(30)) return constant(sign);
    return var(ok[pick((int)ok.size())]);
  }

  // Side formula of an SRR node: every variable leaf must be eps^d-critical
  // and strictly below the branch target in the dependency order.
  TermPtr gamma(bool sign, const std::string& target, int depth) {
    auto allowed = [&]() {
      std::vector<std::string> ok;
      for (const std::string& v : vars)
        if (v != target && omega_less(cert, v, target) &&
            is_critical_sign(sign, flip(eps_of(v))))
          ok.push_back(v);
      return ok;
    };
    if (depth == 0 || coin(55)) {
      std::vector<std::string> ok = allowed();
      if (ok.empty() || coin(25)) return constant(sign);
      return var(ok[pick((int)ok.size())]);
    }
    switch (pick(3)) {
      case 0:
        return sign ? meet(gamma(sign, target, depth - 1),
                           gamma(sign, target, depth - 1))
                    : join(gamma(sign, target, depth - 1),
                           gamma(sign, target, depth - 1));
      default: {
        auto cs = conns(!sign, 1, 2);  // stay inside one polarity class
        if (cs.empty()) return constant(sign);
        const Connective* c = cs[pick((int)cs.size())];
        std::vector<TermPtr> args;
        for (int i = 0; i < c->arity; ++i)
          args.push_back(gamma(child_sign(sign, c->eps[i]), target, depth - 1));
        return app(c->name, args);
      }
    }
  }

  // PIA region aimed at one target variable: SMP and SRR nodes only, critical
  // leaves are occurrences of the target.
  TermPtr pia(bool sign, const std::string& target, int depth) {
    bool target_fits = is_critical_sign(sign, eps_of(target));
    if (depth == 0 || coin(35)) {
      if (target_fits && !coin(25)) return var(target);
      return noncritical_leaf(sign);
    }
    // SMP lattice node: meet under +, join under -.
    if (coin(25))
      return sign ? meet(pia(sign, target, depth - 1),
                         pia(sign, target, depth - 1))
                  : join(pia(sign, target, depth - 1),
                         pia(sign, target, depth - 1));
    // Unary SMP: g under +, f under - (regular connectives included).
    if (coin(50)) {
      auto cs = conns(!sign, 1, 1);
      if (!cs.empty()) {
        const Connective* c = cs[pick((int)cs.size())];
        return app(c->name,
                   {pia(child_sign(sign, c->eps[0]), target, depth - 1)});
      }
    }
    // SRR: g of arity >= 2 under +, f of arity >= 2 under -; one branch
    // coordinate continues the PIA region, the rest take side formulas.
    auto cs = conns(!sign, 2, 8);
    if (cs.empty()) return pia(sign, target, 0);
    const Connective* c = cs[pick((int)cs.size())];
    int branch = pick(c->arity);
    std::vector<TermPtr> args;
    for (int i = 0; i < c->arity; ++i) {
      bool s = child_sign(sign, c->eps[i]);
      args.push_back(i == branch ? pia(s, target, depth - 1)
                                 : gamma(s, target, std::min(2, depth - 1)));
    }
    return app(c->name, args);
  }

  // Skeleton region: Delta-adjoints and SAC nodes; may hand over to a PIA
  // region at any child.
  TermPtr skeleton(bool sign, int depth) {
    if (depth == 0 || coin(20)) {
      if (coin(40)) return constant(sign);
      return var(vars[pick((int)vars.size())]);
    }
    if (coin(30)) return pia(sign, vars[pick((int)vars.size())], depth);
    if (coin(30))
      return sign ? join(skeleton(sign, depth - 1), skeleton(sign, depth - 1))
                  : meet(skeleton(sign, depth - 1), skeleton(sign, depth - 1));
    auto cs = conns(sign, 1, 8);  // SAC: f under +, g under -
    if (cs.empty())
      return sign ? join(skeleton(sign, depth - 1), skeleton(sign, depth - 1))
                  : meet(skeleton(sign, depth - 1), skeleton(sign, depth - 1));
    const Connective* c = cs[pick((int)cs.size())];
    std::vector<TermPtr> args;
    for (int i = 0; i < c->arity; ++i)
      args.push_back(skeleton(child_sign(sign, c->eps[i]), depth - 1));
    return app(c->name, args);
  }
};

}  // namespace

std::vector<Signature> corpus_signatures() {
  return {
      validate_signature({
          {"->", Family::Gn, 2, {Pol::Partial, Pol::One}},
          {"dia", Family::Fn, 1, {Pol::One}},
      }),
      validate_signature({
          {"dia", Family::Fn, 1, {Pol::One}},
          {"box", Family::Gn, 1, {Pol::One}},
          {"e", Family::Fr, 1, {Pol::One}},
          {"u", Family::Gr, 1, {Pol::Partial}},
      }),
      validate_signature({
          {"o", Family::Fn, 2, {Pol::One, Pol::One}},
          {"->", Family::Gn, 2, {Pol::Partial, Pol::One}},
          {"w", Family::Gr, 1, {Pol::One}},
      }),
      validate_signature({
          {"lhd", Family::Fn, 1, {Pol::Partial}},
          {"rhd", Family::Gn, 1, {Pol::Partial}},
          {"l", Family::Fr, 1, {Pol::Partial}},
          {"box", Family::Gn, 1, {Pol::One}},
      }),
  };
}

std::vector<CorpusEntry> generate_corpus(int count, std::uint64_t seed,
                                         int max_depth, int max_vars) {
  std::vector<Signature> sigs = corpus_signatures();
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  static const char* names[] = {"p", "q", "r", "s"};
  while ((int)out.size() < count) {
    const Signature& sig = sigs[out.size() % sigs.size()];
    Gen g{rng, sig};
    int nvars = 1 + g.pick(max_vars);
    for (int i = 0; i < nvars; ++i) g.vars.push_back(names[i]);
    for (const std::string& v : g.vars)
      g.eps.push_back({v, g.coin(50) ? Pol::One : Pol::Partial});
    g.cert.eps = g.eps;
    // Dependency edges only from smaller to larger index, so the order is
    // acyclic; close transitively for well-formedness.
    for (int i = 0; i < nvars; ++i)
      for (int j = i + 1; j < nvars; ++j)
        if (g.coin(40)) g.cert.omega.insert({g.vars[i], g.vars[j]});
    bool grew = true;
    while (grew) {
      grew = false;
      for (const OmegaPair& a : g.cert.omega)
        for (const OmegaPair& b : g.cert.omega)
          if (a.second == b.first &&
              g.cert.omega.insert({a.first, b.second}).second)
            grew = true;
    }
    CorpusEntry e;
    e.sig = sig;
    e.ineq = {g.skeleton(true, max_depth - 1), g.skeleton(false, max_depth - 1)};
    e.cert = g.cert;
    if (variables(e.ineq).empty()) continue;  // want at least one variable
    // The construction guarantees inductivity; verify anyway and skip any
    // counterexample to the generator rather than poisoning the corpus.
    if (!is_inductive(e.ineq, sig, e.cert).holds) continue;
    out.push_back(std::move(e));
  }
  return out;
}

CorpusReport run_corpus(const std::vector<CorpusEntry>& entries,
                        const RunOptions& opt) {
  CorpusReport rep;
  for (const CorpusEntry& e : entries) {
    ++rep.total;
    Signature expanded = expand_signature(e.sig);
    RunResult r = run_strategic(e.ineq, expanded, opt);
    auto note = [&](const std::string& why) {
      rep.failures.push_back(print_ineq(e.ineq, expanded) + ": " + why);
    };
    if (r.status != RunStatus::Success) {
      note(r.reason.empty() ? "run failed" : r.reason);
      rep.results.push_back(std::move(r));
      continue;
    }
    ++rep.successes;
    bool safe = true, pivotal = true, adequate = true, replayed = true;
    for (const Trace& t : r.traces) {
      safe = safe && check_safety(t);
      replayed = replayed && replay_trace(t, expanded);
      adequate = adequate && check_topological_adequacy(t.initial, expanded) &&
                 check_compact_appropriate(t.initial, expanded);
      for (const TraceStep& s : t.steps) {
        if (s.rule.rfind("approx", 0) == 0) pivotal = pivotal && s.pivotal;
        adequate = adequate && check_topological_adequacy(s.after, expanded) &&
                   check_compact_appropriate(s.after, expanded);
      }
    }
    rep.safe += safe;
    rep.pivotal += pivotal;
    rep.adequate += adequate;
    rep.replayed += replayed;
    if (!safe) note("unsafe trace");
    if (!pivotal) note("non-pivotal approximation");
    if (!adequate) note("adequacy or compactness violated");
    if (!replayed) note("trace replay mismatch");
    rep.results.push_back(std::move(r));
  }
  return rep;
}

}  // namespace alba
