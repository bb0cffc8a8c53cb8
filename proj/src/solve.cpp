#include "qbv/solve.hpp"

namespace qbv {

Term mk_conditional_choice(TermStore& store, Term cond, Term d_template,
                           VarId hole, Rel rel, Term t) {
  VarId y = store.fresh_var("y", store.var_sort(hole));
  Term dy = substitute(store, d_template, hole, store.var(y));
  return store.choice(y, store.implies(cond, store.rel(rel, dy, t)));
}

namespace {

SolvedForm solve_rec(TermStore& store, const IcCatalog& catalog, VarId x,
                     Term e, Rel rel, Term t, bool used_choice) {
  if (occurs_free(x, t))
    throw PreconditionError("solve: variable occurs on both literal sides");

  // Base case: e is x itself.
  if (e->kind == Kind::Var && e->var == x) {
    if (rel == Rel::Eq) return SolvedForm{t, used_choice};
    Term cond = catalog.get_ic(x, store.rel(rel, e, t));
    VarId y = store.fresh_var("y", e->sort);
    Term body = store.implies(cond, store.rel(rel, store.var(y), t));
    return SolvedForm{store.choice(y, body), true};
  }

  if (e->kind != Kind::BvOperator)
    throw UnsupportedError("solve: operator outside the bit-vector table");

  // Locate the unique child containing x.
  size_t idx = e->kids.size();
  for (size_t i = 0; i < e->kids.size(); ++i) {
    if (occurs_free(x, e->kids[i])) {
      if (idx != e->kids.size())
        throw PreconditionError("solve: literal is not linear in x");
      idx = i;
    }
  }
  if (idx == e->kids.size())
    throw PreconditionError("solve: variable does not occur in the literal");
  Term ei = e->kids[idx];

  // d[x'] replaces the child containing x with a fresh variable.
  VarId xp = store.fresh_var("x", ei->sort);
  Term xpt = store.var(xp);
  Term d;
  if (e->op == BvOp::Extract) {
    d = store.extract(xpt, e->hi, e->lo);
  } else if (e->kids.size() == 1) {
    d = store.bvop(e->op, xpt);
  } else {
    Term a = idx == 0 ? xpt : e->kids[0];
    Term b = idx == 0 ? e->kids[1] : xpt;
    d = store.bvop(e->op, a, b);
  }

  if (rel == Rel::Eq || rel == Rel::Ne) {
    auto inv = catalog.get_inverse(xp, store.eq(d, t));
    if (inv) return solve_rec(store, catalog, x, ei, rel, *inv, used_choice);
  }

  Term cond = catalog.get_ic(xp, store.rel(rel, d, t));
  Term eps = mk_conditional_choice(store, cond, d, xp, rel, t);
  return solve_rec(store, catalog, x, ei, Rel::Eq, eps, true);
}

}  // namespace

SolvedForm solve_literal(TermStore& store, const IcCatalog& catalog, VarId x,
                         Term lit) {
  if (lit->kind != Kind::Relation)
    throw PreconditionError("solve: expected an atomic relation");
  if (!is_linear_in(lit, x))
    throw PreconditionError("solve: literal is not linear in x");
  Term lhs = lit->kids[0];
  Term rhs = lit->kids[1];
  Rel rel = lit->rel;
  if (occurs_free(x, rhs)) {
    std::swap(lhs, rhs);
    rel = converse(rel);
  }
  return solve_rec(store, catalog, x, lhs, rel, rhs, false);
}

SolvedForm solve_literal(TermStore& store, const IcCatalog& catalog, VarId x,
                         const Literal& lit) {
  return solve_literal(store, catalog, x, literal_term(store, lit));
}

}  // namespace qbv
