#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "alba/corpus.hpp"
#include "alba/model.hpp"
#include "alba/parser.hpp"

using namespace alba;

namespace {

bool color_enabled() {
  const char* v = std::getenv("ALBA_COLOR");
  return v != nullptr && std::string(v) == "1";
}

std::string paint(const std::string& s, const char* code) {
  if (!color_enabled()) return s;
  return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
}

std::string ok(const std::string& s) { return paint(s, "32"); }
std::string bad(const std::string& s) { return paint(s, "31"); }

std::string render_assignment(const Assignment& a) {
  std::string out;
  for (const auto& [k, v] : a.at) {
    if (!out.empty()) out += " ";
    out += k + "=" + std::to_string(v);
  }
  return out;
}

struct Config {
  std::string sig_path;
  std::vector<std::string> model_paths;
  std::string mode = "strategic";
  bool no_pivotal = false;
  std::string trace_path;
  int max_size = 5;
  int depth = 64;
  std::uint64_t seed = 0;
  bool dump_trees = false;
  std::vector<std::string> inputs;
  int count = 500;  // corpus only
};

RunOptions run_options(const Config& cfg) {
  RunOptions opt;
  opt.pivotal = !cfg.no_pivotal;
  opt.depth = cfg.depth;
  return opt;
}

int cmd_classify(const Config& cfg) {
  Signature sig = parse_signature_file(cfg.sig_path);
  for (const std::string& text : cfg.inputs) {
    Inequality iq = parse_ineq(text, sig);
    if (cfg.dump_trees) {
      std::cout << dump_tree(build_signed_tree(iq.lhs, true, sig), sig)
                << dump_tree(build_signed_tree(iq.rhs, false, sig), sig);
    }
    auto cert = find_inductive_certificate(iq, sig);
    if (cert && is_inductive(iq, sig, *cert).holds)
      std::cout << ok("INDUCTIVE") << " " << print_certificate(*cert) << "\n";
    else
      std::cout << "NONE\n";
  }
  return 0;
}

int cmd_run(const Config& cfg) {
  Signature sig = parse_signature_file(cfg.sig_path);
  Signature expanded = expand_signature(sig);
  RunOptions opt = run_options(cfg);
  std::ofstream trace_out;
  if (!cfg.trace_path.empty()) {
    trace_out.open(cfg.trace_path);
    if (!trace_out) throw std::runtime_error("cannot open " + cfg.trace_path);
  }
  bool all_ok = true;
  for (const std::string& text : cfg.inputs) {
    Inequality iq = parse_ineq(text, sig);
    if (cfg.dump_trees) {
      std::cout << dump_tree(build_signed_tree(iq.lhs, true, expanded),
                             expanded)
                << dump_tree(build_signed_tree(iq.rhs, false, expanded),
                             expanded);
    }
    RunResult r = cfg.mode == "exhaustive" ? run_exhaustive(iq, expanded, opt)
                                           : run_strategic(iq, expanded, opt);
    if (r.status != RunStatus::Success) {
      std::cerr << bad("FAILURE") << " " << print_ineq(iq, expanded) << ": "
                << r.reason << "\n";
      all_ok = false;
      continue;
    }
    for (const System& sys : r.systems)
      std::cout << print_quasi_inequality(sys, expanded) << "\n";
    if (trace_out)
      for (const Trace& t : r.traces) trace_out << print_trace(t, expanded);
  }
  return all_ok ? 0 : 1;
}

int cmd_verify(const Config& cfg) {
  Signature sig = parse_signature_file(cfg.sig_path);
  Signature expanded = expand_signature(sig);
  std::vector<FiniteLE> models;
  for (const std::string& path : cfg.model_paths)
    models.push_back(interpret_expanded(parse_model_file(path, sig), expanded));
  RunOptions opt = run_options(cfg);
  bool discrepant = false, all_ok = true;
  for (const std::string& text : cfg.inputs) {
    Inequality iq = parse_ineq(text, sig);
    RunResult r = cfg.mode == "exhaustive" ? run_exhaustive(iq, expanded, opt)
                                           : run_strategic(iq, expanded, opt);
    if (r.status != RunStatus::Success) {
      std::cerr << bad("FAILURE") << " " << print_ineq(iq, expanded) << ": "
                << r.reason << "\n";
      all_ok = false;
      continue;
    }
    std::vector<QuasiInequality> out;
    for (const System& sys : r.systems) {
      QuasiInequality q;
      for (const TaggedInequality& t : sys.members) q.members.push_back(t.ineq);
      q.goal = sys.goal;
      out.push_back(std::move(q));
    }
    OracleVerdict v = equivalence_oracle(iq, out, models);
    if (v.equivalent) {
      std::cout << ok("EQUIVALENT") << " (" << v.assignments
                << " assignments, " << v.models
                << (v.models == 1 ? " model)" : " models)") << "\n";
    } else {
      std::cout << bad("DISCREPANT") << "(" << models[v.model_index].name
                << ", " << render_assignment(v.witness) << ")\n";
      discrepant = true;
    }
  }
  if (discrepant) return 2;
  return all_ok ? 0 : 1;
}

int cmd_corpus(const Config& cfg) {
  auto entries = generate_corpus(cfg.count, cfg.seed);
  CorpusReport rep = run_corpus(entries, run_options(cfg));
  std::cout << "total " << rep.total << "\n"
            << "successes " << rep.successes << "\n"
            << "safe " << rep.safe << "\n"
            << "pivotal " << rep.pivotal << "\n"
            << "adequate " << rep.adequate << "\n"
            << "replayed " << rep.replayed << "\n";
  bool all_ok = rep.failures.empty() && rep.successes == rep.total &&
                rep.safe == rep.total && rep.pivotal == rep.total &&
                rep.adequate == rep.total && rep.replayed == rep.total;
  std::cout << (all_ok ? ok("OK") : bad("FAILED")) << "\n";
  for (const std::string& f : rep.failures) std::cerr << f << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic workbench for lattice expansion correspondence"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool need_sig) {
    auto* s = sub->add_option("--sig", cfg.sig_path, "signature file");
    if (need_sig) s->required();
    sub->add_option("--mode", cfg.mode, "strategic|exhaustive")
        ->check(CLI::IsMember({"strategic", "exhaustive"}));
    sub->add_flag("--no-pivotal", cfg.no_pivotal,
                  "allow non-pivotal approximation steps");
    sub->add_option("--depth", cfg.depth, "rule budget per system");
    sub->add_flag("--dump-trees", cfg.dump_trees,
                  "print signed generation trees");
  };

  CLI::App* classify = app.add_subcommand("classify", "certify inequalities");
  add_common(classify, true);
  classify->add_option("inputs", cfg.inputs, "inequalities")->required();

  CLI::App* run = app.add_subcommand("run", "compute first-order equivalents");
  add_common(run, true);
  run->add_option("--trace", cfg.trace_path, "write the rule trace here");
  run->add_option("inputs", cfg.inputs, "inequalities")->required();

  CLI::App* verify =
      app.add_subcommand("verify", "oracle-check run output on finite models");
  add_common(verify, true);
  verify->add_option("--model", cfg.model_paths, "model file (repeatable)")
      ->required();
  verify->add_option("--max-size", cfg.max_size, "lattice size bound");
  verify->add_option("inputs", cfg.inputs, "inequalities")->required();

  CLI::App* corpus =
      app.add_subcommand("corpus", "generate and run a random corpus");
  add_common(corpus, false);
  corpus->add_option("--seed", cfg.seed, "generator seed")->required();
  corpus->add_option("count", cfg.count, "corpus size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(classify)) return cmd_classify(cfg);
    if (app.got_subcommand(run)) return cmd_run(cfg);
    if (app.got_subcommand(verify)) return cmd_verify(cfg);
    return cmd_corpus(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
