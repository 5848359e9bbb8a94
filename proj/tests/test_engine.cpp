#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alba/engine.hpp"
#include "alba/parser.hpp"

using namespace alba;

namespace {

Signature frege_sig() {
  return expand_signature(validate_signature(
      {{"->", Family::Gn, 2, {Pol::Partial, Pol::One}}}));
}

Signature modal_sig() {
  return expand_signature(validate_signature({
      {"dia", Family::Fn, 1, {Pol::One}},
      {"box", Family::Gn, 1, {Pol::One}},
      {"->", Family::Gn, 2, {Pol::Partial, Pol::One}},
      {"e", Family::Fr, 1, {Pol::One}},
      {"u", Family::Gr, 1, {Pol::Partial}},
      {"w", Family::Gr, 1, {Pol::One}},
  }));
}

Inequality frege(const Signature& s) {
  return parse_ineq("p -> (q -> r) <= (p -> q) -> (p -> r)", s);
}

System goal_only(Inequality iq) {
  System sys;
  sys.goal = std::move(iq);
  return sys;
}

}  // namespace

TEST_CASE("preprocess") {
  Signature s = modal_sig();
  SUBCASE("uniform variables") {
    auto out = preprocess(parse_ineq("p /\\ q <= p", s), s);
    REQUIRE(out.size() == 1);
    CHECK(equal(out[0], parse_ineq("p /\\ top <= p", s)));
  }
  SUBCASE("distribute then split") {
    auto out =
        preprocess(parse_ineq("dia(p \\/ q) <= dia(p) \\/ dia(q)", s), s);
    REQUIRE(out.size() == 2);
    // After the split each piece has a freshly uniform variable, and the
    // fixpoint eliminates it.
    CHECK(equal(out[0], parse_ineq("dia(p) <= dia(p) \\/ dia(bot)", s)));
    CHECK(equal(out[1], parse_ineq("dia(q) <= dia(bot) \\/ dia(q)", s)));
  }
  SUBCASE("meet split on the right") {
    auto out = preprocess(parse_ineq("p <= box(p) /\\ p", s), s);
    REQUIRE(out.size() == 2);
  }
  SUBCASE("no change") {
    auto out = preprocess(frege(frege_sig()), frege_sig());
    REQUIRE(out.size() == 1);
    CHECK(equal(out[0], frege(frege_sig())));
  }
}

TEST_CASE("approximation rule") {
  Signature s = modal_sig();
  System sys = goal_only(parse_ineq("dia(p) <= q", s));
  SUBCASE("pivotal application targets the variable") {
    CHECK_FALSE(approximation_pivotal(sys, s, ApproxFlavor::LPos, {}));
    CHECK(approximation_pivotal(sys, s, ApproxFlavor::LPos, {1}));
    System out = apply_approximation(sys, s, ApproxFlavor::LPos, {1}, true);
    REQUIRE(out.members.size() == 1);
    CHECK(equal(out.members[0].ineq, {nom("j1"), var("p")}));
    CHECK(equal(out.goal, {app("dia", {nom("j1")}), var("q")}));
  }
  SUBCASE("root application rejected only in pivotal mode") {
    CHECK_THROWS_AS(apply_approximation(sys, s, ApproxFlavor::LPos, {}, true),
                    EngineError);
    System out = apply_approximation(sys, s, ApproxFlavor::LPos, {}, false);
    CHECK(equal(out.goal.lhs, nom("j1")));
  }
  SUBCASE("sign mismatch") {
    CHECK_THROWS_AS(apply_approximation(sys, s, ApproxFlavor::LNeg, {1}, true),
                    EngineError);
  }
  SUBCASE("conominal flavor on the right") {
    System out = apply_approximation(sys, s, ApproxFlavor::RNeg, {}, true);
    REQUIRE(out.members.size() == 1);
    CHECK(equal(out.members[0].ineq, {var("q"), conom("m1")}));
  }
  SUBCASE("non-SAC branch above") {
    System deep = goal_only(parse_ineq("box(p) -> p <= q", s));
    // root is +-> (SRR): nothing below it is reachable by approximation
    CHECK_THROWS_AS(apply_approximation(deep, s, ApproxFlavor::LPos, {2}, true),
                    EngineError);
  }
}

TEST_CASE("residuation rules") {
  Signature s = frege_sig();
  SUBCASE("normal right head, 1-coordinate") {
    // h <= j->(q->m)  becomes  j->b2 h <= q->m
    System sys = goal_only(parse_ineq("top <= top", s));
    sys.add_member(parse_ineq("#h <= #j -> (q -> @m)", s));
    System out = apply_residuation(sys, s, 0, 2);
    CHECK(print_ineq(out.members[0].ineq, s) == "#j ->b2 #h <= q -> @m");
  }
  SUBCASE("normal right head, d-coordinate flips sides") {
    System sys = goal_only(parse_ineq("top <= top", s));
    sys.add_member(parse_ineq("#h <= q -> @m", s));
    System out = apply_residuation(sys, s, 0, 1);
    CHECK(print_ineq(out.members[0].ineq, s) == "q <= #h ->b1 @m");
  }
  SUBCASE("regular f head produces the side condition") {
    Signature m = modal_sig();
    System sys = goal_only(parse_ineq("top <= top", m));
    sys.add_member(parse_ineq("e(p) <= @m1", m));
    System out = apply_residuation(sys, m, 0, 1);
    REQUIRE(out.members.size() == 2);
    CHECK(out.members[0].side_condition);
    CHECK(print_ineq(out.members[0].ineq, m) == "e(bot) <= @m1");
    CHECK_FALSE(out.members[1].side_condition);
    CHECK(print_ineq(out.members[1].ineq, m) == "p <= bbox_e(@m1)");
  }
  SUBCASE("regular g head with d order-type") {
    Signature m = modal_sig();
    System sys = goal_only(parse_ineq("top <= top", m));
    sys.add_member(parse_ineq("#j <= u(p)", m));
    System out = apply_residuation(sys, m, 0, 1);
    REQUIRE(out.members.size() == 2);
    CHECK(print_ineq(out.members[0].ineq, m) == "#j <= u(bot)");
    CHECK(out.members[0].side_condition);
    CHECK(print_ineq(out.members[1].ineq, m) == "p <= btr_u(#j)");
  }
  SUBCASE("no residuable head") {
    System sys = goal_only(parse_ineq("top <= top", s));
    sys.add_member(parse_ineq("p <= q", s));
    CHECK_THROWS_AS(apply_residuation(sys, s, 0, 1), EngineError);
  }
}

TEST_CASE("Ackermann rule") {
  Signature s = frege_sig();
  System sys = goal_only(parse_ineq("top <= top", s));
  sys.add_member(parse_ineq("#h <= p -> (q -> r)", s));
  sys.add_member(parse_ineq("#i <= p -> q", s));
  sys.add_member(parse_ineq("#j <= p", s));
  sys.add_member(parse_ineq("r <= @m", s));
  SUBCASE("left elimination of r") {
    CHECK(is_ackermann_ready(sys, s, "r", Pol::Partial));
    System out = apply_ackermann(sys, s, "r", AckSide::Left);
    REQUIRE(out.members.size() == 3);
    CHECK(print_ineq(out.members[0].ineq, s) == "#h <= p -> (q -> @m)");
    CHECK(print_ineq(out.members[1].ineq, s) == "#i <= p -> q");
    CHECK(print_ineq(out.members[2].ineq, s) == "#j <= p");
  }
  SUBCASE("right elimination of p after r") {
    System mid = apply_ackermann(sys, s, "r", AckSide::Left);
    CHECK(is_ackermann_ready(mid, s, "p", Pol::One));
    System out = apply_ackermann(mid, s, "p", AckSide::Right);
    REQUIRE(out.members.size() == 2);
    CHECK(print_ineq(out.members[0].ineq, s) == "#h <= #j -> (q -> @m)");
    CHECK(print_ineq(out.members[1].ineq, s) == "#i <= #j -> q");
  }
  SUBCASE("not ready") {
    System bad = goal_only(parse_ineq("top <= top", s));
    bad.add_member(parse_ineq("#j <= p -> q", s));
    // +q in the member body blocks right elimination of q
    CHECK_FALSE(is_ackermann_ready(bad, s, "q", Pol::One));
    CHECK_THROWS_AS(apply_ackermann(bad, s, "q", AckSide::Right), EngineError);
  }
  SUBCASE("vacuous elimination substitutes the lattice bound") {
    System v = goal_only(parse_ineq("top <= top", s));
    v.add_member(parse_ineq("#j <= p -> q", s));
    System out = apply_ackermann(v, s, "q", AckSide::Left);
    CHECK(print_ineq(out.members[0].ineq, s) == "#j <= p -> top");
  }
}

TEST_CASE("golden run: the Frege inequality") {
  Signature s = frege_sig();
  RunResult r = run_strategic(frege(s), s);
  REQUIRE(r.status == RunStatus::Success);
  REQUIRE(r.cert.has_value());
  CHECK(print_certificate(*r.cert) == "eps p=1 q=d r=d omega p<q r<q");
  REQUIRE(r.systems.size() == 1);
  const System& sys = r.systems[0];
  CHECK(sys.members.empty());
  CHECK(print_quasi_inequality(sys, s) ==
        "FORALL j1 j3 m1 : "
        "#j3 -> ((#j3 ->b2 #j1) ->b1 @m1) <= #j1 ->b1 (#j3 -> @m1)");
  const Trace& tr = r.traces[0];
  CHECK(check_safety(tr));
  CHECK(replay_trace(tr, s));
  int approx = 0;
  for (const TraceStep& st : tr.steps) {
    if (st.rule.rfind("approx-", 0) == 0) {
      ++approx;
      CHECK(st.pivotal);
    }
    CHECK(check_topological_adequacy(st.after, s));
    CHECK(check_compact_appropriate(st.after, s));
  }
  CHECK(approx == 4);
}

TEST_CASE("stripping state on the Frege run") {
  Signature s = frege_sig();
  RunResult r = run_strategic(frege(s), s);
  REQUIRE(r.status == RunStatus::Success);
  const Trace& tr = r.traces[0];
  // After the four approximations the system is stripped and r-ready.
  const System& stripped = tr.steps[3].after;
  CHECK(is_stripped(stripped, s, *r.cert));
  CHECK(is_ackermann_ready(stripped, s, "r", Pol::Partial));
  CHECK_FALSE(is_ackermann_ready(stripped, s, "q", Pol::Partial));
}

TEST_CASE("trivial and failure runs") {
  Signature s = modal_sig();
  SUBCASE("top <= top") {
    RunResult r = run_strategic(parse_ineq("top <= top", s), s);
    CHECK(r.status == RunStatus::Success);
  }
  SUBCASE("strategic needs a certificate") {
    Signature both = expand_signature(validate_signature({
        {"->", Family::Gn, 2, {Pol::Partial, Pol::One}},
        {"box", Family::Gn, 1, {Pol::One}},
    }));
    RunResult r = run_strategic(
        parse_ineq("box((p -> q) \\/ p) <= p", both), both);
    CHECK(r.status == RunStatus::Failure);
    CHECK(r.reason == "no inductive certificate");
  }
  SUBCASE("exhaustive failure is in-band") {
    Signature both = expand_signature(validate_signature({
        {"->", Family::Gn, 2, {Pol::Partial, Pol::One}},
        {"box", Family::Gn, 1, {Pol::One}},
    }));
    RunResult r = run_exhaustive(
        parse_ineq("box((p -> q) \\/ p) <= p", both), both);
    CHECK(r.status == RunStatus::Failure);
    CHECK(r.reason == "no applicable rule");
  }
  SUBCASE("depth cap") {
    // Eliminating q from the Frege inequality takes two residuation steps;
    // with no budget every elimination order runs out.
    RunOptions opt;
    opt.depth = 0;
    RunResult r = run_exhaustive(
        parse_ineq("p -> (q -> r) <= (p -> q) -> (p -> r)", s), s, opt);
    CHECK(r.status == RunStatus::Failure);
    CHECK(r.reason == "depth cap reached");
  }
  SUBCASE("exhaustive succeeds without a certificate when rules suffice") {
    RunResult r =
        run_exhaustive(parse_ineq("box(dia(p)) <= dia(box(p))", s), s);
    CHECK(r.status == RunStatus::Success);
  }
}

TEST_CASE("runs through regular connectives keep safety and adequacy") {
  Signature s = modal_sig();
  bool saw_side_condition = false;
  for (const char* text : {
           "e(p) <= p",
           "p <= u(p)",
           "e(p /\\ q) <= e(p)",
           "e(box(p)) <= dia(p)",
           "top -> w(p) <= dia(box(p))",
       }) {
    CAPTURE(text);
    RunResult r = run_strategic(parse_ineq(text, s), s);
    REQUIRE(r.status == RunStatus::Success);
    for (const Trace& tr : r.traces) {
      CHECK(check_safety(tr));
      CHECK(replay_trace(tr, s));
      for (const TraceStep& st : tr.steps) {
        CHECK(check_topological_adequacy(st.after, s));
        CHECK(check_compact_appropriate(st.after, s));
      }
    }
    for (const System& sys : r.systems) {
      CHECK(is_pure(sys.goal));
      for (const TaggedInequality& m : sys.members) {
        CHECK(is_pure(m.ineq));
        saw_side_condition = saw_side_condition || m.side_condition;
      }
    }
  }
  // The last input peels through the regular connective w.
  CHECK(saw_side_condition);
}

TEST_CASE("adequacy checker") {
  Signature s = modal_sig();
  System sys = goal_only(parse_ineq("top <= top", s));
  sys.add_member(parse_ineq("p <= bbox_e(@m1)", s));
  CHECK_FALSE(check_topological_adequacy(sys, s));
  sys.add_member(parse_ineq("e(bot) <= @m1", s), true);
  CHECK(check_topological_adequacy(sys, s));
  SUBCASE("no black connectives is vacuous") {
    System plain = goal_only(parse_ineq("top <= top", s));
    plain.add_member(parse_ineq("dia(p) <= q", s));
    CHECK(check_topological_adequacy(plain, s));
  }
}

TEST_CASE("compact-appropriateness checker") {
  Signature s = frege_sig();
  System sys = goal_only(parse_ineq("top <= top", s));
  sys.add_member(parse_ineq("#j <= p -> q", s));
  CHECK(check_compact_appropriate(sys, s));
  System bad = goal_only(parse_ineq("top <= top", s));
  Signature m = modal_sig();
  bad.add_member(parse_ineq("bbox_e(p) <= q", m));
  CHECK_FALSE(check_compact_appropriate(bad, m));
  SUBCASE("pure members are exempt") {
    System pure = goal_only(parse_ineq("top <= top", m));
    pure.add_member(parse_ineq("bbox_e(#j) <= @m1", m));
    CHECK(check_compact_appropriate(pure, m));
  }
}

TEST_CASE("safety checker on synthetic traces") {
  Signature s = modal_sig();
  System start = goal_only(parse_ineq("top <= top", s));
  int sid = start.add_member(parse_ineq("e(bot) <= @m1", s), true);
  Trace tr;
  tr.initial = start;
  TraceStep st;
  st.rule = "residuate";
  st.modified_ids = {sid};
  st.after = start;
  SUBCASE("non-Ackermann modification of a side condition") {
    st.is_ackermann = false;
    tr.steps.push_back(st);
    CHECK_FALSE(check_safety(tr));
  }
  SUBCASE("Ackermann substitution is permitted") {
    st.is_ackermann = true;
    tr.steps.push_back(st);
    CHECK(check_safety(tr));
  }
}

TEST_CASE("trace printing format") {
  Signature s = frege_sig();
  RunResult r = run_strategic(frege(s), s);
  REQUIRE(r.status == RunStatus::Success);
  std::string text = print_trace(r.traces[0], s);
  CHECK(text.find("step 1 rule approx-L+ at - pivotal\n") != std::string::npos);
  CHECK(text.find("#j1 <= p -> (q -> r)\n") != std::string::npos);
  CHECK(text.find("|- ") != std::string::npos);
}
