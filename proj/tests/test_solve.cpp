#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "qbv/printer.hpp"
#include "qbv/solve.hpp"
#include "qbv/verifier.hpp"

using namespace qbv;

TEST_CASE("base cases") {
  TermStore st;
  IcCatalog catalog(st);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));

  SolvedForm add = solve_literal(st, catalog, x,
                                 st.eq(st.add(st.var(x), st.var(s)), st.var(t)));
  CHECK(add.term == st.sub(st.var(t), st.var(s)));
  CHECK_FALSE(add.used_choice);

  SolvedForm plain = solve_literal(st, catalog, x, st.eq(st.var(x), st.var(t)));
  CHECK(plain.term == st.var(t));
  CHECK_FALSE(plain.used_choice);
}

TEST_CASE("worked nested example: s1 * (s2 + x) = t") {
  TermStore st;
  IcCatalog catalog(st);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s1 = st.mk_var("s1", Sort::bv(4));
  VarId s2 = st.mk_var("s2", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  Term lit = st.eq(
      st.mul(st.var(s1), st.add(st.var(s2), st.var(x))), st.var(t));

  SolvedForm r = solve_literal(st, catalog, x, lit);
  CHECK(r.used_choice);
  CHECK_FALSE(occurs_free(x, r.term));

  // expected: (choice y. (((-s1|s1) & t = t) => s1 * y = t)) - s2
  VarId y = st.fresh_var("y", Sort::bv(4));
  Term cond = st.eq(
      st.bvop(BvOp::And, st.bvop(BvOp::Or, st.neg(st.var(s1)), st.var(s1)),
              st.var(t)),
      st.var(t));
  Term eps = st.choice(
      y, st.implies(cond, st.eq(st.mul(st.var(s1), st.var(y)), st.var(t))));
  Term expected = st.sub(eps, st.var(s2));
  CHECK(alpha_normalize(st, r.term) == alpha_normalize(st, expected));
}

TEST_CASE("conditional choice construction") {
  TermStore st;
  IcCatalog catalog(st);
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  VarId hole = st.fresh_var("x", Sort::bv(4));
  Term d = st.mul(st.var(hole), st.var(s));
  Term cond = catalog.get_ic(hole, st.eq(d, st.var(t)));
  Term eps = mk_conditional_choice(st, cond, d, hole, Rel::Eq, st.var(t));
  CHECK(eps->kind == Kind::Choice);
  CHECK(free_vars(eps) == std::set<VarId>{s, t});

  // evaluating the choice at s=2, t=6 picks the least witness y=3
  Interpretation interp;
  interp.set(s, BitVec(4, 2));
  interp.set(t, BitVec(4, 6));
  CHECK(evaluate_bv(eps, interp) == BitVec(4, 3));

  // unconditional disequality base case
  VarId x = st.mk_var("xb", Sort::bv(4));
  SolvedForm ne = solve_literal(st, catalog, x, st.ne(st.var(x), st.var(t)));
  CHECK(ne.used_choice);
  CHECK(ne.term->kind == Kind::Choice);
  Term body = ne.term->kids[0];
  REQUIRE(body->kind == Kind::Implies);
  CHECK(body->kids[0] == st.tru());
}

TEST_CASE("disequality propagates through inverses") {
  TermStore st;
  IcCatalog catalog(st);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));

  SolvedForm r = solve_literal(
      st, catalog, x, st.ne(st.add(st.var(x), st.var(s)), st.var(t)));
  // choice over x != t - s, not an inverse term
  CHECK(r.used_choice);
  CHECK(r.term->kind == Kind::Choice);

  // odd-constant multiplication under disequality also peels exactly
  SolvedForm m = solve_literal(
      st, catalog, x,
      st.ne(st.bnot(st.mul(st.var(x), st.num(5, 4))), st.var(t)));
  CHECK(m.term->kind == Kind::Choice);
  CHECK_FALSE(occurs_free(x, m.term));
}

TEST_CASE("errors") {
  TermStore st;
  IcCatalog catalog(st);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));

  Term nonlinear =
      st.eq(st.mul(st.var(x), st.add(st.var(x), st.var(s))), st.var(t));
  CHECK_THROWS_AS(solve_literal(st, catalog, x, nonlinear), PreconditionError);

  Term ite_path = st.eq(st.ite(st.tru(), st.var(x), st.var(s)), st.var(t));
  CHECK_THROWS_AS(solve_literal(st, catalog, x, ite_path), UnsupportedError);
}

TEST_CASE("theorem 1: solved forms are exact, 1000 random literals") {
  TermStore st;
  IcCatalog catalog(st);
  std::mt19937_64 rng(17);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId a = st.mk_var("a", Sort::bv(4));
  VarId b = st.mk_var("b", Sort::bv(4));

  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    Term lit = testgen::gen_linear_literal(st, rng, x, {a, b},
                                           1 + static_cast<int>(rng() % 3));
    SolvedForm r = solve_literal(st, catalog, x, lit);
    CHECK_FALSE(occurs_free(x, r.term));
    std::set<VarId> fv = free_vars(r.term);
    std::set<VarId> lit_fv = free_vars(lit);
    for (VarId v : fv) CHECK(lit_fv.count(v));

    Term instantiated = substitute(st, lit, x, r.term);
    Term exists = st.exists({x}, lit);
    for (uint64_t av = 0; av < 16; ++av)
      for (uint64_t bv_ = 0; bv_ < 16; ++bv_) {
        Interpretation interp;
        interp.set(a, BitVec(4, av));
        interp.set(b, BitVec(4, bv_));
        if (evaluate_bool(instantiated, interp) !=
            evaluate_bool(exists, interp))
          ++failures;
      }
  }
  CHECK(failures == 0);
}

TEST_CASE("lemma 1: the conditional choice is exact for every row") {
  TermStore st;
  IcCatalog catalog(st);
  for (uint32_t w = 1; w <= 4; ++w) {
    for (IcKey key : catalog.entries()) {
      RowWidths rw = row_widths(key, w);
      VarId x = st.fresh_var("x", Sort::bv(rw.xw));
      VarId t = st.fresh_var("t", Sort::bv(rw.tw));
      std::optional<VarId> s;
      Term s_term = nullptr;
      if (rw.has_s()) {
        s = st.fresh_var("s", Sort::bv(rw.sw));
        s_term = st.var(*s);
      }
      Term lit = row_literal(st, key, st.var(x), s_term, st.var(t));
      Term cond = catalog.get_ic(x, lit);
      VarId y = st.fresh_var("y", Sort::bv(rw.xw));
      Term r = st.choice(
          y, st.implies(cond, substitute(st, lit, x, st.var(y))));
      Term lit_r = substitute(st, lit, x, r);
      Term exists = st.exists({x}, lit);

      uint64_t s_count = rw.has_s() ? uint64_t{1} << rw.sw : 1;
      for (uint64_t sv = 0; sv < s_count; ++sv)
        for (uint64_t tv = 0; tv < (uint64_t{1} << rw.tw); ++tv) {
          Interpretation interp;
          if (s) interp.set(*s, BitVec(rw.sw, sv));
          interp.set(t, BitVec(rw.tw, tv));
          bool lhs = evaluate_bool(lit_r, interp);
          bool rhs = evaluate_bool(exists, interp);
          if (lhs != rhs) {
            CAPTURE(to_string(key));
            CAPTURE(w);
            CAPTURE(sv);
            CAPTURE(tv);
            REQUIRE(lhs == rhs);
          }
        }
    }
  }
}

TEST_CASE("recursion depth matches the nesting depth of x") {
  TermStore st;
  IcCatalog catalog(st);
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  // x under three operators, none invertible: three nested choices
  Term e = st.bvop(BvOp::Or, st.bvop(
      BvOp::And, st.bvop(BvOp::Lshr, st.var(x), st.var(s)), st.var(s)),
      st.var(s));
  SolvedForm r =
      solve_literal(st, catalog, x, st.eq(e, st.var(t)));
  int depth = 0;
  Term cur = r.term;
  while (cur->kind == Kind::Choice) {
    ++depth;
    // descend into the equality the next recursion level solved
    Term body = cur->kids[0];  // implies(cond, rel)
    Term rel = body->kids[1];
    cur = nullptr;
    for (Term kid : rel->kids)
      if (contains_choice(kid)) cur = kid;
    if (!cur) break;
  }
  CHECK(depth == 3);
}
