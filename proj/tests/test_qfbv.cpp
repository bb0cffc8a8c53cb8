#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "qbv/qfbv.hpp"

using namespace qbv;

namespace {

// Brute-force CNF satisfiability for cross-checking the CDCL core.
bool cnf_brute_sat(const Cnf& cnf) {
  REQUIRE(cnf.nvars <= 20);
  for (uint64_t m = 0; m < (uint64_t{1} << cnf.nvars); ++m) {
    bool ok = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int lit : clause) {
        bool val = (m >> (std::abs(lit) - 1)) & 1;
        if (lit < 0) val = !val;
        if (val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

Cnf pigeonhole(int pigeons, int holes) {
  Cnf cnf;
  std::vector<std::vector<int>> var(pigeons, std::vector<int>(holes));
  for (int p = 0; p < pigeons; ++p)
    for (int h = 0; h < holes; ++h) var[p][h] = cnf.new_var();
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> clause;
    for (int h = 0; h < holes; ++h) clause.push_back(var[p][h]);
    cnf.add_clause(clause);
  }
  for (int h = 0; h < holes; ++h)
    for (int p1 = 0; p1 < pigeons; ++p1)
      for (int p2 = p1 + 1; p2 < pigeons; ++p2)
        cnf.add_binary(-var[p1][h], -var[p2][h]);
  return cnf;
}

}  // namespace

TEST_CASE("sat core basics") {
  Cnf empty;
  CHECK(sat_solve(empty).status == SatStatus::Sat);

  Cnf contradiction;
  int v = contradiction.new_var();
  contradiction.add_unit(v);
  contradiction.add_unit(-v);
  CHECK(sat_solve(contradiction).status == SatStatus::Unsat);

  Cnf php = pigeonhole(4, 3);
  CHECK(sat_solve(php).status == SatStatus::Unsat);
  CHECK_FALSE(cnf_brute_sat(php));

  Cnf ok = pigeonhole(3, 3);
  SatResult r = sat_solve(ok);
  CHECK(r.status == SatStatus::Sat);
  CHECK(cnf_brute_sat(ok));
}

TEST_CASE("sat core on random 3-cnf agrees with enumeration") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 300; ++round) {
    Cnf cnf;
    int nvars = 3 + static_cast<int>(rng() % 10);
    for (int i = 0; i < nvars; ++i) cnf.new_var();
    int nclauses = 2 + static_cast<int>(rng() % (3 * nvars));
    for (int c = 0; c < nclauses; ++c) {
      std::vector<int> clause;
      for (int k = 0; k < 3; ++k) {
        int var = 1 + static_cast<int>(rng() % nvars);
        clause.push_back(rng() % 2 ? var : -var);
      }
      cnf.add_clause(clause);
    }
    SatResult r = sat_solve(cnf);
    bool expected = cnf_brute_sat(cnf);
    CHECK(r.status == (expected ? SatStatus::Sat : SatStatus::Unsat));
    if (r.status == SatStatus::Sat) {
      for (const auto& clause : cnf.clauses) {
        bool sat = false;
        for (int lit : clause)
          if ((lit > 0) == static_cast<bool>(r.model[std::abs(lit)])) sat = true;
        CHECK(sat);
      }
    }
  }
}

TEST_CASE("sat core resource budget") {
  Cnf hard = pigeonhole(7, 6);
  SatOptions opts;
  opts.conflict_budget = 5;
  CHECK(sat_solve(hard, opts).status == SatStatus::ResourceOut);
}

TEST_CASE("bitblast basics") {
  TermStore st;
  VarId x1 = st.mk_var("x1", Sort::bv(1));
  CHECK(sat_solve(bitblast(st.eq(st.var(x1), st.var(x1))).cnf).status ==
        SatStatus::Sat);

  VarId x2 = st.mk_var("x2", Sort::bv(2));
  CHECK(sat_solve(bitblast(st.rel(Rel::Ult, st.var(x2), st.zero(2))).cnf)
            .status == SatStatus::Unsat);

  VarId x4 = st.mk_var("x4", Sort::bv(4));
  bool has_solution = false;
  for (uint64_t v = 0; v < 16; ++v) has_solution |= (2 * v) % 16 == 3;
  REQUIRE_FALSE(has_solution);
  CHECK(sat_solve(
            bitblast(st.eq(st.mul(st.var(x4), st.num(2, 4)), st.num(3, 4)))
                .cnf)
            .status == SatStatus::Unsat);
}

TEST_CASE("ground checks") {
  TermStore st;
  for (uint32_t w : {4u, 13u, 32u}) {
    VarId s = st.mk_var("s" + std::to_string(w), Sort::bv(w));
    Term one = st.one(w);
    CHECK(check(st, st.eq(st.var(s), st.add(st.var(s), one))).kind ==
          GroundVerdict::Kind::Unsat);
  }

  VarId s = st.mk_var("s", Sort::bv(8));
  VarId t = st.mk_var("t", Sort::bv(8));
  Term diff = st.add(st.sub(st.var(t), st.var(s)), st.var(s));
  CHECK(check(st, st.ne(diff, st.var(t))).kind == GroundVerdict::Kind::Unsat);

  VarId a = st.mk_var("a", Sort::bv(4));
  VarId b = st.mk_var("b", Sort::bv(4));
  GroundVerdict sat = check(st, st.ne(st.var(a), st.var(b)));
  REQUIRE(sat.kind == GroundVerdict::Kind::Sat);
  CHECK(sat.model.get_bv(a) != sat.model.get_bv(b));
}

TEST_CASE("enumeration oracle") {
  TermStore st;
  VarId x = st.mk_var("x", Sort::bv(4));
  CHECK(enumerate_check(st, st.eq(st.mul(st.var(x), st.num(2, 4)),
                                  st.num(3, 4)))
            .kind == GroundVerdict::Kind::Unsat);
  CHECK(enumerate_check(st, st.tru()).kind == GroundVerdict::Kind::Sat);

  VarId y = st.mk_var("y", Sort::bv(2));
  VarId z = st.mk_var("z", Sort::bv(2));
  GroundVerdict v = enumerate_check(
      st, st.eq(st.bvop(BvOp::And, st.var(y), st.var(z)), st.num(3, 2)));
  REQUIRE(v.kind == GroundVerdict::Kind::Sat);
  CHECK(bv_and(v.model.get_bv(y), v.model.get_bv(z)) == BitVec(2, 3));

  VarId big = st.mk_var("big", Sort::bv(32));
  CHECK(enumerate_check(st, st.eq(st.var(big), st.var(big))).kind ==
        GroundVerdict::Kind::ResourceOut);
}

TEST_CASE("bitblast agrees with enumeration on 1000 random formulas") {
  TermStore st;
  std::mt19937_64 rng(29);
  int sat_count = 0, unsat_count = 0;
  for (int i = 0; i < 1000; ++i) {
    uint32_t w = 1 + static_cast<uint32_t>(rng() % 4);
    std::vector<VarId> vars;
    for (int v = 0; v < 3; ++v)
      vars.push_back(st.fresh_var("v", Sort::bv(w)));
    int budget = 8;
    Term phi = testgen::gen_formula(st, rng, w, vars, budget);
    GroundVerdict fast = check(st, phi);
    GroundVerdict slow = enumerate_check(st, phi);
    REQUIRE(fast.kind != GroundVerdict::Kind::ResourceOut);
    REQUIRE(slow.kind != GroundVerdict::Kind::ResourceOut);
    CHECK(fast.kind == slow.kind);
    if (fast.kind == GroundVerdict::Kind::Sat) {
      ++sat_count;
      CHECK(evaluate_bool(phi, fast.model));
    } else {
      ++unsat_count;
    }
  }
  CHECK(sat_count > 0);
  CHECK(unsat_count > 0);
}

TEST_CASE("determinism for a fixed seed") {
  TermStore st;
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    std::vector<VarId> vars;
    for (int v = 0; v < 3; ++v) vars.push_back(st.fresh_var("d", Sort::bv(4)));
    int budget = 8;
    Term phi = testgen::gen_formula(st, rng, 4, vars, budget);
    CheckOptions opts;
    opts.seed = 42;
    GroundVerdict first = check(st, phi, opts);
    GroundVerdict second = check(st, phi, opts);
    CHECK(first.kind == second.kind);
    if (first.kind == GroundVerdict::Kind::Sat)
      for (VarId v : vars)
        CHECK(first.model.get_bv(v) == second.model.get_bv(v));
  }
}

TEST_CASE("external solver protocol") {
  TermStore st;
  VarId a = st.mk_var("a", Sort::bv(4));
  Term phi = st.eq(st.var(a), st.num(3, 4));

  GroundVerdict sat = external_check(
      st, phi, "printf 'sat\\n(model (define-fun a () (_ BitVec 4) #x3))\\n'");
  REQUIRE(sat.kind == GroundVerdict::Kind::Sat);
  CHECK(sat.model.get_bv(a) == BitVec(4, 3));

  CHECK(external_check(st, phi, "echo unsat").kind ==
        GroundVerdict::Kind::Unsat);

  GroundVerdict bad = external_check(st, phi, "echo flubber");
  CHECK(bad.kind == GroundVerdict::Kind::ResourceOut);
  CHECK_FALSE(bad.diagnostic.empty());

  GroundVerdict unknown = external_check(st, phi, "echo unknown");
  CHECK(unknown.kind == GroundVerdict::Kind::ResourceOut);

  // the script sent downstream is well-formed enough to cat back
  GroundVerdict echo = external_check(st, phi, "cat > /dev/null; echo unsat");
  CHECK(echo.kind == GroundVerdict::Kind::Unsat);
}
