#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbv/catalog.hpp"
#include "qbv/printer.hpp"

using namespace qbv;

namespace {

struct Fixture {
  TermStore st;
  IcCatalog catalog{st};
  VarId x = st.mk_var("x", Sort::bv(4));
  VarId s = st.mk_var("s", Sort::bv(4));
  VarId t = st.mk_var("t", Sort::bv(4));
  Term xt = st.var(x);
  Term sv = st.var(s);
  Term tv = st.var(t);
};

}  // namespace

TEST_CASE("multiplication over equality") {
  Fixture f;
  Term lit = f.st.eq(f.st.mul(f.xt, f.sv), f.tv);
  Term cond = f.catalog.get_ic(f.x, lit);
  Term expected = f.st.eq(
      f.st.bvop(BvOp::And, f.st.bvop(BvOp::Or, f.st.neg(f.sv), f.sv), f.tv),
      f.tv);
  CHECK(cond == expected);
  CHECK_FALSE(occurs_free(f.x, cond));

  // s=2, t=3: condition is false, and indeed no 4-bit x satisfies 2x = 3
  Interpretation interp;
  interp.set(f.s, BitVec(4, 2));
  interp.set(f.t, BitVec(4, 3));
  CHECK_FALSE(evaluate_bool(cond, interp));
  bool any = false;
  for (uint64_t v = 0; v < 16 && !any; ++v)
    any = (2 * v) % 16 == 3;
  CHECK_FALSE(any);
}

TEST_CASE("concat disequality is unconditional") {
  Fixture f;
  VarId s2 = f.st.mk_var("s2", Sort::bv(2));
  VarId t6 = f.st.mk_var("t6", Sort::bv(6));
  Term lit =
      f.st.ne(f.st.bvop(BvOp::Concat, f.xt, f.st.var(s2)), f.st.var(t6));
  CHECK(f.catalog.get_ic(f.x, lit) == f.st.tru());
}

TEST_CASE("multiplication over unsigned greater-than") {
  Fixture f;
  Term lit = f.st.rel(Rel::Ugt, f.st.mul(f.xt, f.sv), f.tv);
  Term cond = f.catalog.get_ic(f.x, lit);
  CHECK(cond ==
        f.st.rel(Rel::Ult, f.tv, f.st.bvop(BvOp::Or, f.st.neg(f.sv), f.sv)));

  // at s=2 the condition fails exactly for t >= 14 (max of x*2 mod 16)
  uint64_t max_prod = 0;
  for (uint64_t v = 0; v < 16; ++v) max_prod = std::max(max_prod, (2 * v) % 16);
  CHECK(max_prod == 14);
  for (uint64_t tval = 0; tval < 16; ++tval) {
    Interpretation interp;
    interp.set(f.s, BitVec(4, 2));
    interp.set(f.t, BitVec(4, tval));
    CHECK(evaluate_bool(cond, interp) == (tval < 14));
  }
}

TEST_CASE("unconditional inverses") {
  Fixture f;
  auto inv =
      f.catalog.get_inverse(f.x, f.st.eq(f.st.add(f.xt, f.sv), f.tv));
  REQUIRE(inv.has_value());
  CHECK(*inv == f.st.sub(f.tv, f.sv));

  auto inv3 =
      f.catalog.get_inverse(f.x, f.st.eq(f.st.mul(f.xt, f.st.num(3, 4)), f.tv));
  REQUIRE(inv3.has_value());
  CHECK(*inv3 == f.st.mul(f.tv, f.st.num(11, 4)));

  CHECK_FALSE(
      f.catalog.get_inverse(f.x, f.st.eq(f.st.mul(f.xt, f.sv), f.tv)));

  // inverse side swapped onto the right of the relation
  auto swapped =
      f.catalog.get_inverse(f.x, f.st.eq(f.tv, f.st.neg(f.xt)));
  REQUIRE(swapped.has_value());
  CHECK(*swapped == f.st.neg(f.tv));
}

TEST_CASE("inverse terms are the unique solutions, widths 1..6") {
  for (uint32_t w = 1; w <= 6; ++w) {
    TermStore st;
    IcCatalog catalog(st);
    VarId x = st.mk_var("x", Sort::bv(w));
    VarId s = st.mk_var("s", Sort::bv(w));
    VarId t = st.mk_var("t", Sort::bv(w));
    struct Shape {
      Term lit;
      bool has_s;
    };
    std::vector<Shape> shapes = {
        {st.eq(st.neg(st.var(x)), st.var(t)), false},
        {st.eq(st.bnot(st.var(x)), st.var(t)), false},
        {st.eq(st.add(st.var(x), st.var(s)), st.var(t)), true},
    };
    for (const Shape& shape : shapes) {
      auto inv = catalog.get_inverse(x, shape.lit);
      REQUIRE(inv.has_value());
      uint64_t s_count = shape.has_s ? (uint64_t{1} << w) : 1;
      for (uint64_t sv = 0; sv < s_count; ++sv)
        for (uint64_t tv = 0; tv < (uint64_t{1} << w); ++tv) {
          Interpretation interp;
          interp.set(s, BitVec(w, sv));
          interp.set(t, BitVec(w, tv));
          BitVec solution = evaluate_bv(*inv, interp);
          uint64_t hits = 0;
          for (uint64_t xv = 0; xv < (uint64_t{1} << w); ++xv) {
            Interpretation ext = interp;
            ext.set(x, BitVec(w, xv));
            if (evaluate_bool(shape.lit, ext)) {
              ++hits;
              CHECK(BitVec(w, xv) == solution);
            }
          }
          CHECK(hits == 1);
        }
    }
    // odd-constant multiplication
    for (uint64_t c = 1; c < (uint64_t{1} << w); c += 2) {
      auto inv = catalog.get_inverse(
          x, st.eq(st.mul(st.var(x), st.num(c, w)), st.var(t)));
      REQUIRE(inv.has_value());
      for (uint64_t tv = 0; tv < (uint64_t{1} << w); ++tv) {
        Interpretation interp;
        interp.set(t, BitVec(w, tv));
        BitVec solution = evaluate_bv(*inv, interp);
        CHECK(bv_mul(solution, BitVec(w, c)) == BitVec(w, tv));
      }
    }
  }
}

TEST_CASE("basic bounds checks") {
  Fixture f;
  CHECK(f.catalog.base_case_ic(Rel::Slt, f.tv) ==
        f.st.ne(f.tv, f.st.min_signed_const(4)));
  CHECK(f.catalog.base_case_ic(Rel::Ne, f.tv) == f.st.tru());
  CHECK(f.catalog.base_case_ic(Rel::Uge, f.tv) == f.st.tru());
  CHECK(f.catalog.base_case_ic(Rel::Ult, f.tv) == f.st.ne(f.tv, f.st.zero(4)));
  CHECK(f.catalog.base_case_ic(Rel::Ugt, f.tv) ==
        f.st.ne(f.tv, f.st.all_ones(4)));
  CHECK(f.catalog.base_case_ic(Rel::Sgt, f.tv) ==
        f.st.ne(f.tv, f.st.max_signed_const(4)));
}

TEST_CASE("catalog enumeration") {
  Fixture f;
  auto keys = f.catalog.entries();
  CHECK(keys.size() >= 160);

  IcKey div_ne{IcOp::Udiv, IcSide::Right, Rel::Ne};
  CHECK(std::count(keys.begin(), keys.end(), div_ne) == 1);
  CHECK(f.catalog.width1_kind(div_ne) == Width1Kind::CaseSplit);
  CHECK(f.catalog.width1_kind(IcKey{IcOp::Udiv, IcSide::Right, Rel::Sgt}) ==
        Width1Kind::CaseSplit);
  CHECK(f.catalog.width1_kind(IcKey{IcOp::Udiv, IcSide::Right, Rel::Sge}) ==
        Width1Kind::DerivedOverride);

  IcKey extract_eq{IcOp::Extract, IcSide::Unary, Rel::Eq};
  CHECK(std::count(keys.begin(), keys.end(), extract_eq) == 1);
  Term lit = f.st.eq(f.st.extract(f.xt, 3, 2),
                     f.st.var(f.st.mk_var("t2", Sort::bv(2))));
  CHECK(f.catalog.get_ic(f.x, lit) == f.st.tru());

  // the width-1 division case split materializes at width 1
  TermStore st1;
  IcCatalog cat1(st1);
  VarId x1 = st1.mk_var("x", Sort::bv(1));
  VarId s1 = st1.mk_var("s", Sort::bv(1));
  VarId t1 = st1.mk_var("t", Sort::bv(1));
  Term udiv_lit =
      st1.ne(st1.bvop(BvOp::Udiv, st1.var(s1), st1.var(x1)), st1.var(t1));
  CHECK(cat1.get_ic(x1, udiv_lit) ==
        st1.eq(st1.bvop(BvOp::And, st1.var(s1), st1.var(t1)), st1.zero(1)));

  // no x capture anywhere in the catalog at width 4
  for (IcKey key : keys) {
    Term cond = f.catalog.condition(key, f.sv, f.tv, 4);
    CHECK_FALSE(occurs_free(f.x, cond));
  }
}

TEST_CASE("key parsing round-trips") {
  Fixture f;
  for (IcKey key : f.catalog.entries())
    CHECK(parse_ic_key(to_string(key)) == key);
  CHECK_THROWS_AS(parse_ic_key("bvfoo:l:eq"), UnsupportedError);
  CHECK_THROWS_AS(parse_ic_key("bvmul"), UnsupportedError);
}

TEST_CASE("misuse is reported") {
  Fixture f;
  // nonlinear literal
  Term bad =
      f.st.eq(f.st.mul(f.xt, f.st.add(f.xt, f.sv)), f.tv);
  CHECK_THROWS_AS(f.catalog.get_ic(f.x, bad), PreconditionError);
  // operator outside the table (ite)
  Term ite_lit =
      f.st.eq(f.st.ite(f.st.tru(), f.xt, f.sv), f.tv);
  CHECK_THROWS_AS(f.catalog.get_ic(f.x, ite_lit), UnsupportedError);
  // x not a direct operand
  Term deep = f.st.eq(f.st.add(f.st.mul(f.xt, f.sv), f.sv), f.tv);
  CHECK_THROWS_AS(f.catalog.get_ic(f.x, deep), UnsupportedError);
}
