// ucalc: evaluate terms, replay rewrite traces, run the equivalence
// harness and drive the Vminus pass and translation.
//
// Exit codes: 0 success, 1 input/replay error, 2 error answer,
// 3 undefined (unreachable reached), 4 timeout / out of fuel,
// 5 harness disagreement, 6 no witness found.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ucalc/dominators.hpp"
#include "ucalc/eval.hpp"
#include "ucalc/harness.hpp"
#include "ucalc/rewrite.hpp"
#include "ucalc/safety.hpp"
#include "ucalc/syntax.hpp"
#include "ucalc/translate.hpp"
#include "ucalc/vminus.hpp"

namespace {

using namespace ucalc;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TermPtr load_term(const std::string& path, const std::string& inline_text) {
  return parse_term(inline_text.empty() ? read_input(path) : inline_text);
}

VarSet parse_delta(const std::string& s) {
  VarSet out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

int obs_exit(const Observation& o) {
  switch (o.kind) {
    case ObsKind::Value:
    case ObsKind::Function: return 0;
    case ObsKind::Error: return 2;
    case ObsKind::Undef: return 3;
    case ObsKind::Timeout: return 4;
  }
  return 1;
}

int vm_exit(const vminus::VOutcome& o) {
  switch (o.kind) {
    case vminus::VKind::Returned: return 0;
    case vminus::VKind::Errored: return 2;
    case vminus::VKind::HitUnreachable: return 3;
    case vminus::VKind::OutOfFuel: return 4;
  }
  return 1;
}

struct Options {
  std::uint64_t fuel = 100000;
  std::uint64_t seed = 0;
  std::size_t samples = 20;
  std::string safety = "syntactic";
  std::size_t depth = 12;
  std::size_t width = 64;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucalc: a call-by-value calculus with unreachable, and a small SSA IR"};
  app.require_subcommand(1);
  Options opt;
  int exit_code = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--fuel", opt.fuel, "Step budget")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    sub->add_option("--samples", opt.samples, "Sampled contexts or inputs")->capture_default_str();
    sub->add_option("--safety", opt.safety, "Safety provider")
        ->check(CLI::IsMember({"syntactic", "integer"}))
        ->capture_default_str();
  };

  // eval
  std::string eval_input = "-", eval_expr;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a closed term and print its observation");
  eval_cmd->add_option("input", eval_input, "Term file, or - for stdin");
  eval_cmd->add_option("-e,--expr", eval_expr, "Term text");
  add_common(eval_cmd);
  eval_cmd->callback([&] {
    TermPtr e = load_term(eval_input, eval_expr);
    Observation o = eval(e, Fuel{opt.fuel});
    std::cout << o.to_string() << "\n";
    exit_code = obs_exit(o);
  });

  // rewrite
  std::string rw_term, rw_trace;
  auto* rw_cmd = app.add_subcommand("rewrite", "Replay a rewrite trace and print the result");
  rw_cmd->add_option("term", rw_term, "Term file")->required();
  rw_cmd->add_option("trace", rw_trace, "Trace file")->required();
  add_common(rw_cmd);
  rw_cmd->callback([&] {
    TermPtr e = load_term(rw_term, "");
    RewriteTrace t = parse_trace(read_input(rw_trace));
    std::cout << print_term(apply_trace(e, t, safety_by_name(opt.safety))) << "\n";
  });

  // normalize
  std::string norm_term;
  bool norm_trace = false;
  auto* norm_cmd = app.add_subcommand("normalize", "Propagate unreachable and eliminate dead branches");
  norm_cmd->add_option("term", norm_term, "Term file, or - for stdin")->required();
  norm_cmd->add_flag("--trace", norm_trace, "Also print the witness trace");
  add_common(norm_cmd);
  norm_cmd->callback([&] {
    Normalized n = normalize_unreachable(load_term(norm_term, ""), safety_by_name(opt.safety));
    std::cout << print_term(n.term) << "\n";
    if (norm_trace) std::cout << format_trace(n.trace);
  });

  // search
  std::string search_from, search_to;
  auto* search_cmd = app.add_subcommand("search", "Search for a rewrite trace between two terms");
  search_cmd->add_option("from", search_from, "Source term file")->required();
  search_cmd->add_option("to", search_to, "Target term file")->required();
  search_cmd->add_option("--depth", opt.depth, "Maximum trace length")->capture_default_str();
  search_cmd->add_option("--width", opt.width, "Children kept per expansion")->capture_default_str();
  add_common(search_cmd);
  search_cmd->callback([&] {
    SearchBounds b;
    b.depth = opt.depth;
    b.width = opt.width;
    auto t = search_equiv(load_term(search_from, ""), load_term(search_to, ""), b, safety_by_name(opt.safety));
    if (!t) {
      std::cout << "no witness within depth " << opt.depth << "\n";
      exit_code = 6;
      return;
    }
    std::cout << format_trace(*t);
  });

  // harness
  std::string h_term, h_trace, h_against, h_delta, h_pool = "standard";
  std::vector<std::string> h_contexts;
  bool h_unconditional = false, h_jsonl = false;
  auto* h_cmd = app.add_subcommand("harness", "Compare a term with its rewrite in sampled closing contexts");
  h_cmd->add_option("term", h_term, "Term file")->required();
  h_cmd->add_option("--delta", h_delta, "Comma-separated free variables");
  auto* trace_opt = h_cmd->add_option("--trace", h_trace, "Trace file to replay");
  h_cmd->add_option("--against", h_against, "Compare directly with this term file")->excludes(trace_opt);
  h_cmd->add_option("--context", h_contexts, "Fixed context containing []; repeatable");
  h_cmd->add_option("--pool", h_pool, "Value pool for closing substitutions")
      ->check(CLI::IsMember({"standard", "integer"}))
      ->capture_default_str();
  h_cmd->add_flag("--unconditional", h_unconditional, "Require undefined cases to stay undefined");
  h_cmd->add_flag("--jsonl", h_jsonl, "Print one JSON record per case");
  add_common(h_cmd);
  h_cmd->callback([&] {
    HarnessConfig cfg;
    cfg.fuel = Fuel{opt.fuel};
    cfg.contexts = opt.samples;
    cfg.seed = opt.seed;
    cfg.pool = h_pool == "integer" ? ValuePool::integers() : ValuePool::standard();
    cfg.unconditional = h_unconditional;
    for (const auto& c : h_contexts) cfg.fixed_contexts.push_back(parse_context(c));
    std::cout << "# harness fuel=" << opt.fuel << " seed=" << opt.seed << " samples=" << opt.samples
              << " safety=" << opt.safety << " pool=" << h_pool << (h_unconditional ? " unconditional" : "") << "\n";
    TermPtr e = load_term(h_term, "");
    VarSet delta = parse_delta(h_delta);
    HarnessReport r;
    if (!h_against.empty()) {
      r = compare_terms(e, load_term(h_against, ""), delta, cfg);
    } else {
      RewriteTrace t = h_trace.empty() ? RewriteTrace{} : parse_trace(read_input(h_trace));
      r = check_correctness(e, delta, t, safety_by_name(opt.safety), cfg);
    }
    if (h_jsonl) {
      std::cout << r.to_jsonl();
    } else {
      std::istringstream lines(r.to_jsonl());
      std::string line;
      while (std::getline(lines, line))
        if (line.find("\"disagree\"") != std::string::npos) std::cout << line << "\n";
    }
    std::cout << r.summary() << "\n";
    exit_code = r.disagree ? 5 : 0;
  });

  // vmin
  auto* vmin = app.add_subcommand("vmin", "Vminus: simplify, run, translate, check");
  vmin->require_subcommand(1);
  std::string vm_file;

  auto* vs = vmin->add_subcommand("simplify", "Run the unreachable-block simplification to a fixpoint");
  vs->add_option("file", vm_file, "Vminus file")->required();
  vs->callback([&] {
    auto f = vminus::parse_function(read_input(vm_file));
    vminus::validate(f);
    std::cout << vminus::print_function(vminus::simplify_function_cfg(f));
  });

  std::vector<std::string> run_args;
  auto* vr = vmin->add_subcommand("run", "Interpret a function on integer arguments");
  vr->add_option("file", vm_file, "Vminus file")->required();
  vr->add_option("args", run_args, "Integer arguments");
  vr->add_option("--fuel", opt.fuel, "Instruction budget")->capture_default_str();
  vr->callback([&] {
    auto f = vminus::parse_function(read_input(vm_file));
    vminus::validate(f);
    std::vector<Integer> args;
    for (const auto& a : run_args) {
      if (!is_int_token(a)) throw std::runtime_error("argument '" + a + "' is not an integer");
      args.emplace_back(a);
    }
    auto o = vminus::eval_vminus(f, args, opt.fuel);
    std::cout << o.to_string() << "\n";
    exit_code = vm_exit(o);
  });

  auto* vt = vmin->add_subcommand("translate", "Print the lambda-term translation");
  vt->add_option("file", vm_file, "Vminus file")->required();
  vt->callback([&] {
    auto f = vminus::parse_function(read_input(vm_file));
    std::cout << print_term(translate::translate_function(f)) << "\n";
  });

  std::string check_block;
  bool check_witness = false;
  auto add_check = [&](const std::string& name) {
    auto* vc = vmin->add_subcommand(name, "Differential check of one unreachable-block simplification");
    vc->add_option("file", vm_file, "Vminus file")->required();
    vc->add_option("block", check_block, "Unreachable-terminated block")->required();
    vc->add_flag("--witness", check_witness, "Also search for a rewrite witness");
    vc->add_option("--depth", opt.depth, "Witness search depth")->capture_default_str();
    vc->add_option("--width", opt.width, "Witness search width")->capture_default_str();
    vc->add_option("--fuel", opt.fuel, "Term evaluation budget")->capture_default_str();
    vc->add_option("--seed", opt.seed, "Input sampling seed")->capture_default_str();
    vc->add_option("--samples", opt.samples, "Sampled inputs")->capture_default_str();
    vc->callback([&] {
      auto f = vminus::parse_function(read_input(vm_file));
      translate::SimplificationConfig cfg;
      cfg.samples = opt.samples;
      cfg.seed = opt.seed;
      cfg.term_fuel = Fuel{opt.fuel};
      cfg.search_witness = check_witness;
      cfg.bounds.depth = opt.depth;
      cfg.bounds.width = opt.width;
      std::cout << "# check fuel=" << opt.fuel << " seed=" << opt.seed << " samples=" << opt.samples
                << " safety=integer\n";
      auto r = translate::check_unreachable_simplification(f, check_block, cfg);
      std::cout << r.to_text();
      exit_code = r.disagree ? 5 : 0;
    });
  };
  add_check("check83");
  add_check("check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const RewriteError& e) {
    std::cerr << "rewrite error: " << e.what() << "\n";
    return 1;
  } catch (const vminus::VminusError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
