#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "qbv/parser.hpp"
#include "qbv/printer.hpp"

using namespace qbv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run_cli_binary(const std::string& args) {
  std::string out_path = "/tmp/qbv_test_out.txt";
  std::string err_path = "/tmp/qbv_test_err.txt";
  std::string cmd = std::string(QBV_BIN) + " " + args + " > " + out_path +
                    " 2> " + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("parses the quantified fragment") {
  TermStore st;
  Script script = parse_script(st, R"(
(set-logic BV)
(declare-const s (_ BitVec 4))
(declare-const t (_ BitVec 4))
(assert (forall ((x (_ BitVec 4))) (distinct (bvadd x s) t)))
(check-sat)
)");
  CHECK(script.logic == "BV");
  CHECK(script.check_sat);
  REQUIRE(script.consts.size() == 2);
  REQUIRE(script.assertions.size() == 1);
  Term a = script.assertions[0];
  REQUIRE(a->kind == Kind::Forall);
  Term body = a->kids[0];
  REQUIRE(body->kind == Kind::Relation);
  CHECK(body->rel == Rel::Ne);
  CHECK(body->kids[0]->op == BvOp::Add);
}

TEST_CASE("constants, indexed values, sugar") {
  TermStore st;
  Script script = parse_script(st, R"(
(set-logic QF_BV)
(declare-fun a () (_ BitVec 4))
(declare-const p Bool)
(assert (= (_ bv5 4) #x5))
(assert (= #b0101 a))
(assert (= p (distinct p p)))
(assert (bvule (bvsub a (_ bv1 4)) ((_ extract 3 0) (concat a a))))
(assert (let ((z (bvadd a a))) (= z (bvmul (_ bv2 4) a))))
(check-sat)
)");
  CHECK(script.assertions.size() == 5);
  // (_ bv5 4) folds against #x5
  CHECK(script.assertions[0] == st.tru());
}

TEST_CASE("diagnostics carry positions") {
  TermStore st;
  try {
    parse_script(st, "(set-logic BV)\n(declare-fun f ((_ BitVec 4)) (_ BitVec 4))\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("uninterpreted") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_script(st, "(set-logic BV)\n(declare-const a (_ BitVec 65))\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_script(st, "(pop 1)"), ParseError);
  CHECK_THROWS_AS(parse_script(st, "(assert (bvfoo x y))"), ParseError);
  CHECK_THROWS_AS(
      parse_script(st, "(declare-const q Bool)\n(assert (forall ((b Bool)) b))"),
      ParseError);
}

TEST_CASE("print-parse round trip on 500 generated scripts") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 500; ++i) {
    TermStore st;
    uint32_t w = 1 + static_cast<uint32_t>(rng() % 8);
    std::vector<VarId> consts;
    for (int v = 0; v < 3; ++v)
      consts.push_back(st.mk_var("c" + std::to_string(v), Sort::bv(w)));
    int budget = 8;
    Term body = testgen::gen_formula(st, rng, w, consts, budget);
    if (rng() % 2) {
      // wrap part of the formula under a quantifier
      VarId q = st.mk_var("q0", Sort::bv(w));
      int qbudget = 4;
      Term inner = testgen::gen_formula(st, rng, w, {q, consts[0]}, qbudget);
      body = st.mk_and(body, rng() % 2 ? st.forall({q}, inner)
                                       : st.exists({q}, inner));
    }
    std::ostringstream script;
    script << "(set-logic BV)\n";
    for (VarId c : consts)
      script << "(declare-const " << st.var_name(c) << " "
             << sort_smtlib(st.var_sort(c)) << ")\n";
    script << "(assert " << to_smtlib(st, body) << ")\n(check-sat)\n";

    TermStore st2;
    Script parsed = parse_script(st2, script.str());
    REQUIRE(parsed.assertions.size() == 1);
    CHECK(to_smtlib(st2, parsed.assertions[0]) == to_smtlib(st, body));
  }
}

TEST_CASE("cli: verdicts and exit codes") {
  write_file("/tmp/qbv_motivating.smt2", R"(
(set-logic BV)
(declare-const s (_ BitVec 32))
(declare-const t (_ BitVec 32))
(assert (forall ((x (_ BitVec 32))) (distinct (bvadd x s) t)))
(check-sat)
)");
  for (std::string config : {"k", "s", "b"}) {
    RunResult r = run_cli_binary("solve /tmp/qbv_motivating.smt2 --config " +
                                 config);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "unsat\n");
  }

  write_file("/tmp/qbv_sat.smt2", R"(
(set-logic QF_BV)
(declare-const a (_ BitVec 4))
(assert (bvult a #x3))
(check-sat)
)");
  RunResult sat = run_cli_binary("solve /tmp/qbv_sat.smt2 --print-model");
  CHECK(sat.exit_code == 0);
  CHECK(sat.out.rfind("sat\n", 0) == 0);
  CHECK(sat.out.find("define-fun a") != std::string::npos);

  write_file("/tmp/qbv_nested.smt2", R"(
(set-logic BV)
(declare-const a (_ BitVec 4))
(assert (forall ((x (_ BitVec 4))) (exists ((y (_ BitVec 4))) (= (bvadd x y) a))))
(check-sat)
)");
  RunResult nested = run_cli_binary("solve /tmp/qbv_nested.smt2");
  CHECK(nested.exit_code == 2);
  CHECK(nested.err.find("alternation") != std::string::npos);

  write_file("/tmp/qbv_bad.smt2", "(set-logic LIA)\n");
  CHECK(run_cli_binary("solve /tmp/qbv_bad.smt2").exit_code == 2);

  CHECK(run_cli_binary("frobnicate").exit_code == 2);

  // budget exhaustion reports unknown / exit 1
  RunResult unknown = run_cli_binary(
      "solve /tmp/qbv_motivating.smt2 --config m --max-inst 3");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.out == "unknown\n");
}

TEST_CASE("cli: deterministic output for a fixed seed") {
  write_file("/tmp/qbv_det.smt2", R"(
(set-logic BV)
(declare-const a (_ BitVec 6))
(declare-const b (_ BitVec 6))
(assert (forall ((x (_ BitVec 6))) (or (bvugt (bvmul x a) b) (bvult x (bvor a b)))))
(check-sat)
)");
  RunResult r1 = run_cli_binary("solve /tmp/qbv_det.smt2 --seed 7 --print-model");
  RunResult r2 = run_cli_binary("solve /tmp/qbv_det.smt2 --seed 7 --print-model");
  CHECK(r1.exit_code == r2.exit_code);
  CHECK(r1.out == r2.out);
}

TEST_CASE("cli: external backend round-trips through itself") {
  write_file("/tmp/qbv_ext.smt2", R"(
(set-logic BV)
(declare-const a (_ BitVec 4))
(declare-const b (_ BitVec 4))
(assert (forall ((x (_ BitVec 4))) (bvule (bvmul x a) b)))
(check-sat)
)");
  RunResult r = run_cli_binary(
      std::string("solve /tmp/qbv_ext.smt2 --config b --backend "
                  "\"external:") +
      QBV_BIN + " solve - --print-model\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "sat\n");
}

TEST_CASE("cli: get-model command behaves like --print-model") {
  write_file("/tmp/qbv_gm.smt2", R"(
(set-logic QF_BV)
(declare-const a (_ BitVec 4))
(assert (= a #x7))
(check-sat)
(get-model)
)");
  RunResult r = run_cli_binary("solve /tmp/qbv_gm.smt2");
  CHECK(r.out.find("#b0111") != std::string::npos);
}

TEST_CASE("cli: verify-ic single entry") {
  RunResult r = run_cli_binary(
      "verify-ic --entry bvudiv:r:sge --width-min 1 --width-max 3 "
      "--format records");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("bvudiv:r:sge 1 verified") != std::string::npos);
  CHECK(r.out.find("refuted") == std::string::npos);
}

TEST_CASE("cli: emitters write and re-parse") {
  RunResult rv = run_cli_binary("emit-verify --out /tmp/qbv_emit --width 2");
  CHECK(rv.exit_code == 0);
  RunResult rs =
      run_cli_binary("emit-sygus --grammar r --out /tmp/qbv_sygus");
  CHECK(rs.exit_code == 0);
  CHECK(rs.err.find("140") != std::string::npos);

  RunResult dump = run_cli_binary("dump-catalog");
  CHECK(dump.exit_code == 0);
  CHECK(dump.out.find("bvmul:l:eq") != std::string::npos);
}
