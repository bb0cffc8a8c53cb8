#pragma once

#include "qbv/catalog.hpp"
#include "qbv/term.hpp"

namespace qbv {

// Symbolic solution for x in a literal linear in x. The term may contain
// choice binders; it never contains x, and its free variables are a
// subset of the literal's minus x.
struct SolvedForm {
  Term term = nullptr;
  bool used_choice = false;
};

// Solves e[x] R t by peeling one operator level at a time: unconditional
// inverses for {bvnot, bvneg, bvadd} over (dis)equality and for
// multiplication by an odd constant, a conditional choice binder
// otherwise. Throws PreconditionError when the literal is not linear in x
// and UnsupportedError when an operator on the path to x has no catalog
// row.
SolvedForm solve_literal(TermStore& store, const IcCatalog& catalog, VarId x,
                         Term lit);
SolvedForm solve_literal(TermStore& store, const IcCatalog& catalog, VarId x,
                         const Literal& lit);

// choice y. (cond => d[y] R t) for a fresh y, where d is a template with
// a distinguished hole variable.
Term mk_conditional_choice(TermStore& store, Term cond, Term d_template,
                           VarId hole, Rel rel, Term t);

}  // namespace qbv
