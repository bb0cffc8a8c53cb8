#include "qbv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qbv/cegqi.hpp"
#include "qbv/parser.hpp"
#include "qbv/printer.hpp"
#include "qbv/verifier.hpp"

namespace qbv {

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Backend parse_backend(const std::string& text) {
  Backend backend;
  if (text == "bitblast") {
    backend.kind = BackendKind::BitBlast;
  } else if (text == "enum") {
    backend.kind = BackendKind::Enumerate;
  } else if (text.rfind("external:", 0) == 0) {
    backend.kind = BackendKind::External;
    backend.external_cmd = text.substr(9);
    if (backend.external_cmd.empty())
      throw UnsupportedError("external backend needs a command");
  } else {
    throw UnsupportedError("unknown backend '" + text +
                           "', expected bitblast, enum or external:CMD");
  }
  return backend;
}

int cmd_solve(const std::string& file, const std::string& config_text,
              uint64_t max_inst, const std::string& backend_text,
              uint64_t seed, bool stats, bool print_model) {
  TermStore store;
  IcCatalog catalog(store);

  Script script;
  Problem problem;
  try {
    script = parse_script(store, read_input(file));
    problem = preprocess(store, script.assertions, script.consts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CegqiOptions opts;
  opts.config = parse_config(config_text);
  opts.max_instantiations = max_inst;
  opts.backend = parse_backend(backend_text);
  opts.check.seed = seed;
  opts.collect_log = stats;

  CegqiVerdict verdict = cegqi_check(store, catalog, problem, opts);

  std::string answer;
  switch (verdict.kind) {
    case CegqiVerdict::Kind::Sat:
      answer = problem.negated ? "unsat" : "sat";
      break;
    case CegqiVerdict::Kind::Unsat:
      answer = problem.negated ? "sat" : "unsat";
      break;
    case CegqiVerdict::Kind::ResourceOut:
      answer = "unknown";
      break;
  }
  std::cout << answer << "\n";

  if ((print_model || script.get_model) && answer == "sat" &&
      !problem.negated && verdict.kind == CegqiVerdict::Kind::Sat) {
    Interpretation full = verdict.model;
    for (VarId c : script.consts) {
      if (full.contains(c)) continue;
      Sort s = store.var_sort(c);
      if (s.is_bool())
        full.set(c, false);
      else
        full.set(c, BitVec::zero(s.width()));
    }
    std::cout << model_smtlib(store, full);
  }

  if (stats) {
    std::cerr << "config=" << config_letter(opts.config) << "\n"
              << "verdict=" << answer << "\n"
              << "rounds=" << verdict.stats.rounds << "\n"
              << "instantiations=" << verdict.stats.instantiations << "\n"
              << "model_fallbacks=" << verdict.stats.model_fallbacks << "\n"
              << "duplicate_retries=" << verdict.stats.duplicate_retries
              << "\n"
              << "choice_constants=" << verdict.stats.choice_constants << "\n";
    if (!verdict.diagnostic.empty())
      std::cerr << "diagnostic=" << verdict.diagnostic << "\n";
    for (size_t i = 0; i < verdict.log.size(); ++i) {
      const RoundLog& log = verdict.log[i];
      std::cerr << "round_" << i + 1 << "_model=" << log.model << "\n";
      for (size_t j = 0; j < log.chosen_terms.size(); ++j)
        std::cerr << "round_" << i + 1 << "_term_" << j + 1 << "="
                  << log.chosen_terms[j] << "\n";
      if (log.model_fallback)
        std::cerr << "round_" << i + 1 << "_fallback=model_value\n";
      if (log.duplicate_retry)
        std::cerr << "round_" << i + 1 << "_fallback=duplicate_retry\n";
    }
  }
  return answer == "unknown" ? 1 : 0;
}

int cmd_verify_ic(uint32_t wmin, uint32_t wmax, const std::string& entry,
                  unsigned jobs, const std::string& format) {
  TermStore store;
  IcCatalog catalog(store);
  std::vector<IcKey> only;
  const std::vector<IcKey>* filter = nullptr;
  if (!entry.empty()) {
    only.push_back(parse_ic_key(entry));
    filter = &only;
  }
  VerifySummary summary = verify_all(store, catalog, wmin, wmax, jobs, filter);
  if (format == "records")
    std::cout << summary_records(summary);
  else
    std::cout << summary_table(summary);
  return summary.refuted == 0 ? 0 : 1;
}

int cmd_emit_verify(const std::string& out_dir, uint32_t width) {
  std::filesystem::create_directories(out_dir);
  TermStore store;
  IcCatalog catalog(store);
  size_t count = 0;
  for (IcKey key : catalog.entries()) {
    std::string name = to_string(key);
    for (char& c : name)
      if (c == ':') c = '-';
    std::filesystem::path path = std::filesystem::path(out_dir) /
                                 (name + "-w" + std::to_string(width) +
                                  ".smt2");
    std::ofstream out(path);
    out << emit_verification_smt2(store, catalog, key, width);
    ++count;
  }
  std::cerr << "wrote " << count << " scripts to " << out_dir << "\n";
  return 0;
}

int cmd_emit_sygus(const std::string& grammar_text, const std::string& out_dir,
                   uint32_t width) {
  SygusGrammar grammar;
  if (grammar_text == "r")
    grammar = SygusGrammar::Restricted;
  else if (grammar_text == "g")
    grammar = SygusGrammar::General;
  else
    throw UnsupportedError("unknown grammar '" + grammar_text +
                           "', expected r or g");
  std::filesystem::create_directories(out_dir);
  size_t count = 0;
  for (SygusShape shape : sygus_shapes()) {
    for (Rel rel : {Rel::Eq, Rel::Ne, Rel::Ult, Rel::Ugt, Rel::Ule, Rel::Uge,
                    Rel::Slt, Rel::Sgt, Rel::Sle, Rel::Sge}) {
      TermStore store;
      IcKey key{shape.op, shape.side, rel};
      std::string name = to_string(key);
      for (char& c : name)
        if (c == ':') c = '-';
      std::filesystem::path path =
          std::filesystem::path(out_dir) /
          (name + "-" + grammar_text + ".sl");
      std::ofstream out(path);
      out << emit_sygus(store, shape, rel, grammar, width);
      ++count;
    }
  }
  std::cerr << "wrote " << count << " problems to " << out_dir << "\n";
  return 0;
}

int cmd_dump_catalog(uint32_t width) {
  TermStore store;
  IcCatalog catalog(store);
  for (IcKey key : catalog.entries()) {
    RowWidths rw = row_widths(key, width);
    VarId x = store.fresh_var("x", Sort::bv(rw.xw));
    VarId t = store.fresh_var("t", Sort::bv(rw.tw));
    Term s_term = nullptr;
    if (rw.has_s()) {
      VarId s = store.fresh_var("s", Sort::bv(rw.sw));
      s_term = store.var(s);
    }
    Term lit = row_literal(store, key, store.var(x), s_term, store.var(t));
    Term cond = catalog.get_ic(x, lit);
    std::cout << to_string(key) << " | " << to_smtlib(store, lit) << " | "
              << to_smtlib(store, cond);
    if (catalog.width1_kind(key) == Width1Kind::CaseSplit)
      std::cout << " | width-1 case split";
    if (catalog.width1_kind(key) == Width1Kind::DerivedOverride)
      std::cout << " | width-1 override (exhaustively derived)";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"qbv - a quantified bit-vector solver built on invertibility "
               "conditions"};
  app.require_subcommand(1);

  // solve
  std::string file;
  std::string config_text = "b";
  uint64_t max_inst = 10000;
  std::string backend_text = "bitblast";
  uint64_t seed = 0;
  bool stats = false;
  bool print_model = false;
  CLI::App* solve = app.add_subcommand(
      "solve", "decide an SMT-LIB 2 script ('-' reads standard input)");
  solve->add_option("file", file, "input script")->required();
  solve->add_option("--config", config_text,
                    "selection configuration: m, k, s or b");
  solve->add_option("--max-inst", max_inst, "instantiation budget");
  solve->add_option("--backend", backend_text,
                    "ground backend: bitblast, enum or external:CMD");
  solve->add_option("--seed", seed, "random seed for the SAT core");
  solve->add_flag("--stats", stats, "statistics on the diagnostic stream");
  solve->add_flag("--print-model", print_model,
                  "print define-fun lines for free constants when sat");

  // verify-ic
  uint32_t wmin = 1, wmax = 4;
  std::string entry;
  unsigned jobs = 1;
  std::string format = "table";
  CLI::App* verify = app.add_subcommand(
      "verify-ic", "exhaustively check catalog conditions against "
                   "enumeration");
  verify->add_option("--width-min", wmin, "smallest width");
  verify->add_option("--width-max", wmax, "largest width");
  verify->add_option("--entry", entry, "single row, as op:side:rel");
  verify->add_option("--jobs", jobs, "parallel workers");
  verify->add_option("--format", format, "table or records");

  // emit-verify
  std::string out_dir;
  uint32_t emit_width = 4;
  CLI::App* emit_verify = app.add_subcommand(
      "emit-verify", "write one verification script per catalog row");
  emit_verify->add_option("--out", out_dir, "output directory")->required();
  emit_verify->add_option("--width", emit_width, "operand width");

  // emit-sygus
  std::string grammar_text;
  std::string sygus_dir;
  uint32_t sygus_width = 4;
  CLI::App* emit_sygus_cmd = app.add_subcommand(
      "emit-sygus", "write the synthesis problem grid for one grammar");
  emit_sygus_cmd->add_option("--grammar", grammar_text, "r or g")->required();
  emit_sygus_cmd->add_option("--out", sygus_dir, "output directory")
      ->required();
  emit_sygus_cmd->add_option("--width", sygus_width, "operand width");

  // dump-catalog
  uint32_t dump_width = 4;
  CLI::App* dump = app.add_subcommand(
      "dump-catalog", "print every catalog row in SMT-LIB syntax");
  dump->add_option("--width", dump_width, "operand width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed())
      return cmd_solve(file, config_text, max_inst, backend_text, seed, stats,
                       print_model);
    if (verify->parsed()) return cmd_verify_ic(wmin, wmax, entry, jobs, format);
    if (emit_verify->parsed()) return cmd_emit_verify(out_dir, emit_width);
    if (emit_sygus_cmd->parsed())
      return cmd_emit_sygus(grammar_text, sygus_dir, sygus_width);
    if (dump->parsed()) return cmd_dump_catalog(dump_width);
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace qbv
