#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "generators.hpp"
#include "qbv/printer.hpp"
#include "qbv/term.hpp"

using namespace qbv;

TEST_CASE("construction folds constants and dedupes") {
  TermStore st;
  CHECK(st.add(st.num(2, 4), st.num(3, 4)) == st.num(5, 4));
  VarId x = st.mk_var("x", Sort::bv(4));
  Term a = st.eq(st.var(x), st.var(x));
  Term b = st.eq(st.var(x), st.var(x));
  CHECK(a == b);  // identical node handles
  VarId y8 = st.mk_var("y", Sort::bv(8));
  CHECK_THROWS_AS(st.eq(st.var(x), st.var(y8)), SortError);
  CHECK(st.rel(Rel::Ult, st.num(2, 4), st.num(3, 4)) == st.tru());
  CHECK(st.mk_and(st.tru(), st.fls()) == st.fls());
}

TEST_CASE("free variables respect binders") {
  TermStore st;
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  VarId y = st.mk_var("y", Sort::bv(4));
  VarId x = st.mk_var("x", Sort::bv(4));

  Term choice = st.choice(y, st.eq(st.mul(st.var(y), st.var(s)), st.var(t)));
  CHECK(free_vars(choice) == std::set<VarId>{s, t});

  Term quant = st.forall({x}, st.ne(st.add(st.var(x), st.var(s)), st.var(t)));
  CHECK(free_vars(quant) == std::set<VarId>{s, t});

  CHECK(free_vars(st.num(5, 4)).empty());
}

TEST_CASE("substitution hits free occurrences only") {
  TermStore st;
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  VarId y = st.mk_var("y", Sort::bv(4));

  Term sum = st.add(st.var(x), st.var(s));
  Term repl = st.sub(st.var(t), st.var(s));
  CHECK(substitute(st, sum, x, repl) == st.add(repl, st.var(s)));

  Term bound = st.choice(y, st.eq(st.var(y), st.var(x)));
  CHECK(substitute(st, bound, y, st.zero(4)) == bound);

  CHECK(substitute(st, st.var(x), x, st.var(x)) == st.var(x));
  CHECK_THROWS_AS(substitute(st, st.var(x), x, st.num(0, 8)), SortError);
}

TEST_CASE("evaluation of choice and quantifiers") {
  TermStore st;
  VarId y = st.mk_var("y", Sort::bv(4));
  Interpretation empty;

  // ascending search: first y with y*3 == 5 mod 16 is 7
  Term c = st.choice(
      y, st.implies(st.tru(), st.eq(st.mul(st.var(y), st.num(3, 4)),
                                    st.num(5, 4))));
  CHECK(evaluate_bv(c, empty) == BitVec(4, 7));

  VarId x2 = st.mk_var("x2", Sort::bv(2));
  CHECK(evaluate_bool(st.forall({x2}, st.eq(st.var(x2), st.var(x2))), empty));

  // unsatisfiable body: documented default 0
  Term none = st.choice(y, st.rel(Rel::Ult, st.var(y), st.zero(4)));
  CHECK(evaluate_bv(none, empty) == BitVec(4, 0));

  VarId free = st.mk_var("f", Sort::bv(4));
  CHECK_THROWS_AS(evaluate(st.var(free), empty), SortError);

  VarId wide = st.mk_var("w", Sort::bv(16));
  Term big = st.forall({wide}, st.eq(st.var(wide), st.var(wide)));
  CHECK_THROWS_AS(evaluate(big, empty), ResourceError);
  EvalOptions raised;
  raised.quant_width_cap = 16;
  CHECK(evaluate_bool(big, empty, raised));
}

TEST_CASE("literal collection") {
  TermStore st;
  VarId a = st.mk_var("a", Sort::bv(4));
  VarId b = st.mk_var("b", Sort::bv(4));
  VarId c = st.mk_var("c", Sort::bv(4));
  VarId d = st.mk_var("d", Sort::bv(4));

  Term phi = st.mk_or(st.eq(st.var(a), st.var(b)),
                      st.mk_not(st.rel(Rel::Ult, st.var(c), st.var(d))));
  auto lits = literals(phi);
  REQUIRE(lits.size() == 2);
  CHECK(lits[0].positive);
  CHECK(lits[0].atom == st.eq(st.var(a), st.var(b)));
  CHECK_FALSE(lits[1].positive);
  CHECK(lits[1].atom == st.rel(Rel::Ult, st.var(c), st.var(d)));

  CHECK(literals(st.tru()).empty());

  VarId x = st.mk_var("x", Sort::bv(4));
  Term single = st.rel(Rel::Ugt, st.mul(st.var(x), st.var(a)), st.var(b));
  auto ls = literals(single);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].positive);
  CHECK(ls[0].atom == single);
}

TEST_CASE("occurrence counting") {
  TermStore st;
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId a = st.mk_var("a", Sort::bv(4));
  VarId b = st.mk_var("b", Sort::bv(4));
  Term linear = st.eq(st.add(st.var(x), st.var(a)), st.var(b));
  CHECK(is_linear_in(linear, x));
  Term nonlinear =
      st.eq(st.mul(st.var(x), st.add(st.var(x), st.var(a))), st.var(b));
  CHECK_FALSE(is_linear_in(nonlinear, x));
  CHECK(occurrences(x, nonlinear) == 2);
  CHECK(occurrences(x, st.ne(st.var(a), st.var(b))) == 0);
}

TEST_CASE("substitute commutes with evaluation") {
  TermStore st;
  std::mt19937_64 rng(11);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId a = st.mk_var("a", Sort::bv(4));
  VarId b = st.mk_var("b", Sort::bv(4));
  std::vector<VarId> vars{x, a, b};
  int checked = 0;
  for (int i = 0; i < 1100; ++i) {
    int budget = 5;
    Term t = testgen::gen_bv_term(st, rng, 4, vars, budget);
    BitVec v(4, rng());
    Interpretation interp;
    interp.set(a, BitVec(4, rng()));
    interp.set(b, BitVec(4, rng()));
    Interpretation extended = interp;
    extended.set(x, v);
    Term substituted = substitute(st, t, x, st.bv_const(v));
    CHECK(value_eq(evaluate(substituted, interp), evaluate(t, extended)));
    // substituted term no longer mentions x
    CHECK(occurrences(x, substituted) == 0);
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("choice picks a witness whenever one exists") {
  TermStore st;
  std::mt19937_64 rng(13);
  for (uint32_t w = 1; w <= 4; ++w) {
    VarId x = st.mk_var("cx" + std::to_string(w), Sort::bv(w));
    VarId a = st.mk_var("ca" + std::to_string(w), Sort::bv(w));
    for (int i = 0; i < 150; ++i) {
      int budget = 4;
      Term body = testgen::gen_formula(st, rng, w, {x, a}, budget);
      for (uint64_t av = 0; av < (uint64_t{1} << w); ++av) {
        Interpretation interp;
        interp.set(a, BitVec(w, av));
        bool exists = evaluate_bool(st.exists({x}, body), interp);
        BitVec witness = evaluate_bv(st.choice(x, body), interp);
        Interpretation extended = interp;
        extended.set(x, witness);
        if (exists) CHECK(evaluate_bool(body, extended));
      }
    }
  }
}

TEST_CASE("alpha normalization identifies renamed choice binders") {
  TermStore st;
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId y1 = st.fresh_var("y", Sort::bv(4));
  VarId y2 = st.fresh_var("y", Sort::bv(4));
  Term c1 = st.choice(y1, st.eq(st.var(y1), st.var(s)));
  Term c2 = st.choice(y2, st.eq(st.var(y2), st.var(s)));
  CHECK(c1 != c2);
  CHECK(alpha_normalize(st, c1) == alpha_normalize(st, c2));

  // nested binders at different depths stay distinct
  Term n1 = st.choice(
      y1, st.eq(st.var(y1), st.choice(y2, st.ne(st.var(y2), st.var(s)))));
  Term n2 = st.choice(
      y2, st.eq(st.var(y2), st.choice(y1, st.ne(st.var(y1), st.var(s)))));
  CHECK(alpha_normalize(st, n1) == alpha_normalize(st, n2));
}

TEST_CASE("concurrent construction is serialized by the store") {
  TermStore st;
  VarId a = st.mk_var("a", Sort::bv(8));
  std::vector<std::thread> pool;
  std::vector<Term> results(8);
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&, i] {
      Term acc = st.var(a);
      for (int k = 0; k < 500; ++k) acc = st.add(acc, st.num(k % 7, 8));
      results[i] = acc;
    });
  for (auto& th : pool) th.join();
  for (int i = 1; i < 8; ++i) CHECK(results[i] == results[0]);
}
