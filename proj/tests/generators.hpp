#pragma once

// Random-input helpers shared by the unit and acceptance suites. All
// generators are deterministic for a fixed std::mt19937_64 state.

#include <random>
#include <vector>

#include "qbv/cegqi.hpp"
#include "qbv/term.hpp"

namespace qbv::testgen {

inline uint64_t pick(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

// Random quantifier-free bit-vector term of the given width over vars,
// spending at most `budget` operator applications.
inline Term gen_bv_term(TermStore& st, std::mt19937_64& rng, uint32_t width,
                        const std::vector<VarId>& vars, int& budget) {
  if (budget <= 0 || pick(rng, 4) == 0) {
    // Leaf: variable of matching width if available, constant otherwise.
    std::vector<VarId> fits;
    for (VarId v : vars)
      if (st.var_sort(v).is_bv() && st.var_sort(v).width() == width)
        fits.push_back(v);
    if (!fits.empty() && pick(rng, 3) != 0)
      return st.var(fits[pick(rng, fits.size())]);
    return st.num(rng(), width);
  }
  --budget;
  switch (pick(rng, 12)) {
    case 0: return st.bnot(gen_bv_term(st, rng, width, vars, budget));
    case 1: return st.neg(gen_bv_term(st, rng, width, vars, budget));
    case 2:
      return st.bvop(BvOp::And, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 3:
      return st.bvop(BvOp::Or, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 4:
      return st.add(gen_bv_term(st, rng, width, vars, budget),
                    gen_bv_term(st, rng, width, vars, budget));
    case 5:
      return st.mul(gen_bv_term(st, rng, width, vars, budget),
                    gen_bv_term(st, rng, width, vars, budget));
    case 6:
      return st.bvop(BvOp::Udiv, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 7:
      return st.bvop(BvOp::Urem, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 8:
      return st.bvop(BvOp::Shl, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 9:
      return st.bvop(BvOp::Lshr, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    case 10:
      return st.bvop(BvOp::Ashr, gen_bv_term(st, rng, width, vars, budget),
                     gen_bv_term(st, rng, width, vars, budget));
    default: {
      // extract of a concat, keeping the overall width
      if (2 * width > kMaxWidth)
        return st.add(gen_bv_term(st, rng, width, vars, budget),
                      gen_bv_term(st, rng, width, vars, budget));
      Term cat =
          st.bvop(BvOp::Concat, gen_bv_term(st, rng, width, vars, budget),
                  gen_bv_term(st, rng, width, vars, budget));
      uint32_t lo = static_cast<uint32_t>(pick(rng, width + 1));
      return st.extract(cat, lo + width - 1, lo);
    }
  }
}

inline Rel gen_rel(std::mt19937_64& rng) {
  static constexpr Rel all[] = {Rel::Eq,  Rel::Ne,  Rel::Ult, Rel::Ugt,
                                Rel::Ule, Rel::Uge, Rel::Slt, Rel::Sgt,
                                Rel::Sle, Rel::Sge};
  return all[pick(rng, 10)];
}

// Random quantifier-free formula: Boolean combination of relations.
inline Term gen_formula(TermStore& st, std::mt19937_64& rng, uint32_t width,
                        const std::vector<VarId>& vars, int& budget) {
  if (budget <= 1 || pick(rng, 3) == 0) {
    Term a = gen_bv_term(st, rng, width, vars, budget);
    Term b = gen_bv_term(st, rng, width, vars, budget);
    return st.rel(gen_rel(rng), a, b);
  }
  --budget;
  switch (pick(rng, 4)) {
    case 0:
      return st.mk_not(gen_formula(st, rng, width, vars, budget));
    case 1:
      return st.mk_and(gen_formula(st, rng, width, vars, budget),
                       gen_formula(st, rng, width, vars, budget));
    case 2:
      return st.mk_or(gen_formula(st, rng, width, vars, budget),
                      gen_formula(st, rng, width, vars, budget));
    default:
      return st.implies(gen_formula(st, rng, width, vars, budget),
                        gen_formula(st, rng, width, vars, budget));
  }
}

// A literal linear in x: x wrapped in `depth` operator levels (following
// the operator table, including the concat/extract width changes), then
// compared against an x-free term of the final width.
inline Term gen_linear_literal(TermStore& st, std::mt19937_64& rng, VarId x,
                               const std::vector<VarId>& others, int depth,
                               uint32_t width_cap = 8) {
  Term e = st.var(x);
  for (int lev = 0; lev < depth; ++lev) {
    uint32_t w = e->sort.width();
    int side_budget = 2;
    Term s = gen_bv_term(st, rng, w, others, side_budget);
    switch (pick(rng, 13)) {
      case 0: e = st.bnot(e); break;
      case 1: e = st.neg(e); break;
      case 2: e = pick(rng, 2) ? st.add(e, s) : st.add(s, e); break;
      case 3: e = pick(rng, 2) ? st.mul(e, s) : st.mul(s, e); break;
      case 4: e = st.bvop(BvOp::And, e, s); break;
      case 5: e = st.bvop(BvOp::Or, e, s); break;
      case 6:
        e = pick(rng, 2) ? st.bvop(BvOp::Urem, e, s)
                         : st.bvop(BvOp::Urem, s, e);
        break;
      case 7:
        e = pick(rng, 2) ? st.bvop(BvOp::Udiv, e, s)
                         : st.bvop(BvOp::Udiv, s, e);
        break;
      case 8:
        e = pick(rng, 2) ? st.bvop(BvOp::Shl, e, s)
                         : st.bvop(BvOp::Shl, s, e);
        break;
      case 9:
        e = pick(rng, 2) ? st.bvop(BvOp::Lshr, e, s)
                         : st.bvop(BvOp::Lshr, s, e);
        break;
      case 10:
        e = pick(rng, 2) ? st.bvop(BvOp::Ashr, e, s)
                         : st.bvop(BvOp::Ashr, s, e);
        break;
      case 11: {
        uint32_t extra = 1 + static_cast<uint32_t>(pick(rng, 3));
        if (w + extra > width_cap) {
          e = st.add(e, s);
          break;
        }
        int b2 = 1;
        Term side = gen_bv_term(st, rng, extra, others, b2);
        e = pick(rng, 2) ? st.bvop(BvOp::Concat, e, side)
                         : st.bvop(BvOp::Concat, side, e);
        break;
      }
      default: {
        if (w < 2) {
          e = st.neg(e);
          break;
        }
        uint32_t lo = static_cast<uint32_t>(pick(rng, w - 1));
        uint32_t hi = lo + static_cast<uint32_t>(
                               pick(rng, w - lo));
        e = st.extract(e, hi, lo);
        break;
      }
    }
  }
  int t_budget = 2;
  Term t = gen_bv_term(st, rng, e->sort.width(), others, t_budget);
  return pick(rng, 2) ? st.rel(gen_rel(rng), e, t)
                      : st.rel(gen_rel(rng), t, e);
}

// Exhaustive truth of exists outer . forall universals . matrix.
inline bool quantified_oracle_sat(TermStore& st, const Problem& p,
                                  uint32_t quant_cap = 8) {
  Term closed = st.forall(p.universals, p.matrix);
  std::vector<uint64_t> counter(p.outer.size(), 0);
  std::vector<uint64_t> limit(p.outer.size());
  for (size_t i = 0; i < p.outer.size(); ++i)
    limit[i] = uint64_t{1} << st.var_sort(p.outer[i]).width();
  EvalOptions opts;
  opts.quant_width_cap = quant_cap;
  Interpretation interp;
  for (;;) {
    for (size_t i = 0; i < p.outer.size(); ++i)
      interp.set(p.outer[i],
                 BitVec(st.var_sort(p.outer[i]).width(), counter[i]));
    if (evaluate_bool(closed, interp, opts)) return true;
    size_t i = 0;
    while (i < counter.size() && ++counter[i] == limit[i]) counter[i++] = 0;
    if (i == counter.size()) return false;
  }
}

}  // namespace qbv::testgen
