#include "qbv/catalog.hpp"

#include <array>

namespace qbv {

namespace {

const char* op_name(IcOp op) {
  switch (op) {
    case IcOp::BaseX: return "x";
    case IcOp::Not: return "bvnot";
    case IcOp::Neg: return "bvneg";
    case IcOp::Add: return "bvadd";
    case IcOp::Mul: return "bvmul";
    case IcOp::Urem: return "bvurem";
    case IcOp::Udiv: return "bvudiv";
    case IcOp::And: return "bvand";
    case IcOp::Or: return "bvor";
    case IcOp::Lshr: return "bvlshr";
    case IcOp::Ashr: return "bvashr";
    case IcOp::Shl: return "bvshl";
    case IcOp::Concat: return "concat";
    case IcOp::Extract: return "extract";
  }
  throw Error("bad catalog operator");
}

const char* rel_key_name(Rel r) {
  switch (r) {
    case Rel::Eq: return "eq";
    case Rel::Ne: return "ne";
    case Rel::Ult: return "ult";
    case Rel::Ugt: return "ugt";
    case Rel::Ule: return "ule";
    case Rel::Uge: return "uge";
    case Rel::Slt: return "slt";
    case Rel::Sgt: return "sgt";
    case Rel::Sle: return "sle";
    case Rel::Sge: return "sge";
  }
  throw Error("bad relation");
}

constexpr std::array<Rel, kRelCount> kAllRels = {
    Rel::Eq,  Rel::Ne,  Rel::Ult, Rel::Ugt, Rel::Ule,
    Rel::Uge, Rel::Slt, Rel::Sgt, Rel::Sle, Rel::Sge};

}  // namespace

std::string to_string(IcKey key) {
  std::string side = key.side == IcSide::Left    ? "l"
                     : key.side == IcSide::Right ? "r"
                                                 : "u";
  return std::string(op_name(key.op)) + ":" + side + ":" +
         rel_key_name(key.rel);
}

IcKey parse_ic_key(const std::string& text) {
  auto p1 = text.find(':');
  auto p2 = text.rfind(':');
  if (p1 == std::string::npos || p2 == p1)
    throw UnsupportedError("bad catalog key '" + text +
                           "', expected op:side:rel");
  std::string ops = text.substr(0, p1);
  std::string sides = text.substr(p1 + 1, p2 - p1 - 1);
  std::string rels = text.substr(p2 + 1);
  IcKey key{};
  bool found = false;
  for (int i = 0; i <= static_cast<int>(IcOp::Extract); ++i)
    if (ops == op_name(static_cast<IcOp>(i))) {
      key.op = static_cast<IcOp>(i);
      found = true;
    }
  if (!found) throw UnsupportedError("unknown catalog operator '" + ops + "'");
  if (sides == "l")
    key.side = IcSide::Left;
  else if (sides == "r")
    key.side = IcSide::Right;
  else if (sides == "u")
    key.side = IcSide::Unary;
  else
    throw UnsupportedError("unknown catalog side '" + sides + "'");
  found = false;
  for (Rel r : kAllRels)
    if (rels == rel_key_name(r)) {
      key.rel = r;
      found = true;
    }
  if (!found) throw UnsupportedError("unknown relation '" + rels + "'");
  return key;
}

Term IcCatalog::base_case_ic(Rel rel, Term t) const {
  TermStore& st = store_;
  uint32_t w = t->sort.width();
  switch (rel) {
    case Rel::Eq:
    case Rel::Ne:
    case Rel::Ule:
    case Rel::Uge:
    case Rel::Sle:
    case Rel::Sge:
      return st.tru();
    case Rel::Ult: return st.ne(t, st.zero(w));
    case Rel::Ugt: return st.ne(t, st.all_ones(w));
    case Rel::Slt: return st.ne(t, st.min_signed_const(w));
    case Rel::Sgt: return st.ne(t, st.max_signed_const(w));
  }
  throw Error("bad relation");
}

Term IcCatalog::condition(IcKey key, Term s, Term t, uint32_t x_width) const {
  TermStore& st = store_;
  const Rel rel = key.rel;
  const uint32_t w = x_width;

  auto R = [&](Rel r, Term a, Term b) { return st.rel(r, a, b); };
  auto And2 = [&](Term a, Term b) { return st.mk_and(a, b); };
  auto Or2 = [&](Term a, Term b) { return st.mk_or(a, b); };
  auto Imp = [&](Term a, Term b) { return st.implies(a, b); };

  // Shorthands at the operand width.
  auto zero = [&](Term of) { return st.zero(of->sort.width()); };
  auto ones = [&](Term of) { return st.all_ones(of->sort.width()); };
  auto mins = [&](Term of) {
    return st.min_signed_const(of->sort.width());
  };
  auto maxs = [&](Term of) {
    return st.max_signed_const(of->sort.width());
  };
  auto kappa = [&](Term of) {
    uint32_t ww = of->sort.width();
    return st.num(ww, ww);
  };

  auto bnot = [&](Term a) { return st.bnot(a); };
  auto bneg = [&](Term a) { return st.neg(a); };
  auto band = [&](Term a, Term b) { return st.bvop(BvOp::And, a, b); };
  auto bor = [&](Term a, Term b) { return st.bvop(BvOp::Or, a, b); };
  auto badd = [&](Term a, Term b) { return st.add(a, b); };
  auto bsub = [&](Term a, Term b) { return st.sub(a, b); };
  auto bmul = [&](Term a, Term b) { return st.mul(a, b); };
  auto budiv = [&](Term a, Term b) { return st.bvop(BvOp::Udiv, a, b); };
  auto bshl = [&](Term a, Term b) { return st.bvop(BvOp::Shl, a, b); };
  auto blshr = [&](Term a, Term b) { return st.bvop(BvOp::Lshr, a, b); };
  auto bashr = [&](Term a, Term b) { return st.bvop(BvOp::Ashr, a, b); };

  // One disjunct per shift amount i = 0..kappa(s), with constant amounts.
  auto shift_family = [&](BvOp shift, Rel r) {
    uint32_t ww = s->sort.width();
    std::vector<Term> disjuncts;
    disjuncts.reserve(ww + 1);
    for (uint32_t i = 0; i <= ww; ++i)
      disjuncts.push_back(R(r, st.bvop(shift, s, st.num(i, ww)), t));
    return st.mk_or(std::move(disjuncts));
  };

  switch (key.op) {
    // x R t, ~x R t, -x R t, x + s R t and x[u:l] R t share the basic
    // bounds checks; equality and disequality are unconditionally solvable.
    case IcOp::BaseX:
    case IcOp::Not:
    case IcOp::Neg:
    case IcOp::Add:
    case IcOp::Extract:
      return base_case_ic(rel, t);

    case IcOp::Mul:
      switch (rel) {
        case Rel::Eq: return R(Rel::Eq, band(bor(bneg(s), s), t), t);
        case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, zero(t)));
        case Rel::Ult: return st.ne(t, zero(t));
        case Rel::Ugt: return R(Rel::Ult, t, bor(bneg(s), s));
        case Rel::Ule: return st.tru();
        case Rel::Uge: return R(Rel::Uge, bor(bneg(s), s), t);
        case Rel::Slt:
          return R(Rel::Slt, band(bnot(bneg(t)), bor(bneg(s), s)), t);
        case Rel::Sgt:
          return R(Rel::Slt, t, bsub(t, bor(bor(s, t), bneg(s))));
        case Rel::Sle:
          return st.mk_not(And2(st.eq(s, zero(s)), R(Rel::Slt, t, s)));
        case Rel::Sge:
          return R(Rel::Sge, band(bor(bneg(s), s), maxs(s)), t);
      }
      break;

    case IcOp::Urem:
      if (key.side == IcSide::Left) {
        switch (rel) {
          case Rel::Eq: return R(Rel::Uge, bnot(bneg(s)), t);
          case Rel::Ne: return Or2(st.ne(s, st.one(s->sort.width())),
                                   st.ne(t, zero(t)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, bnot(bneg(s)));
          case Rel::Ule: return st.tru();
          case Rel::Uge: return R(Rel::Uge, bnot(bneg(s)), t);
          case Rel::Slt:
            return R(Rel::Slt, bnot(t), bor(bneg(s), bneg(t)));
          case Rel::Sgt:
            return st.mk_and(
                {Imp(R(Rel::Sgt, s, zero(s)), R(Rel::Slt, t, bnot(bneg(s)))),
                 Imp(R(Rel::Sle, s, zero(s)), st.ne(t, maxs(t))),
                 Or2(st.ne(t, zero(t)), st.ne(s, st.one(s->sort.width())))});
          case Rel::Sle:
            return R(Rel::Slt, ones(t), band(bneg(s), t));
          case Rel::Sge:
            return Or2(R(Rel::Slt, t, s), R(Rel::Sge, zero(s), s));
        }
      } else {
        switch (rel) {
          case Rel::Eq:
            return R(Rel::Uge, band(bsub(badd(t, t), s), s), t);
          case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, zero(t)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, s);
          case Rel::Ule: return st.tru();
          case Rel::Uge:
            return Or2(R(Rel::Uge, band(bsub(badd(t, t), s), s), t),
                       R(Rel::Ult, t, s));
          case Rel::Slt:
            return Or2(R(Rel::Slt, s, t), R(Rel::Slt, zero(t), t));
          case Rel::Sgt:
            return And2(
                Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sgt, s, t)),
                Imp(R(Rel::Slt, s, zero(s)),
                    R(Rel::Sgt,
                      blshr(bsub(s, st.one(s->sort.width())),
                            st.one(s->sort.width())),
                      t)));
          case Rel::Sle:
            return Or2(R(Rel::Ult, t, mins(t)), R(Rel::Sge, t, s));
          case Rel::Sge:
            return And2(Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sge, s, t)),
                        Imp(And2(R(Rel::Slt, s, zero(s)),
                                 R(Rel::Sge, t, zero(t))),
                            R(Rel::Ugt, bsub(s, t), t)));
        }
      }
      break;

    case IcOp::Udiv:
      if (key.side == IcSide::Left) {
        switch (rel) {
          case Rel::Eq: return R(Rel::Eq, budiv(bmul(s, t), s), t);
          case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, ones(t)));
          case Rel::Ult:
            return And2(R(Rel::Ult, zero(s), s), R(Rel::Ult, zero(t), t));
          case Rel::Ugt: return R(Rel::Ugt, budiv(ones(s), s), t);
          case Rel::Ule: return R(Rel::Uge, bor(s, t), bnot(bneg(s)));
          case Rel::Uge:
            return R(Rel::Eq, band(budiv(bmul(s, t), t), s), s);
          case Rel::Slt:
            return Imp(R(Rel::Sle, t, zero(t)),
                       R(Rel::Slt, budiv(mins(s), s), t));
          case Rel::Sgt:
            return Or2(R(Rel::Sgt, budiv(ones(s), s), t),
                       R(Rel::Sgt, budiv(maxs(s), s), t));
          case Rel::Sle:
            return Or2(R(Rel::Eq, budiv(bmul(s, t), s), t),
                       Imp(R(Rel::Sle, t, zero(t)),
                           R(Rel::Slt, budiv(mins(s), s), t)));
          case Rel::Sge:
            return Or2(R(Rel::Sge, budiv(ones(s), s), t),
                       R(Rel::Sge, budiv(maxs(s), s), t));
        }
      } else {
        switch (rel) {
          case Rel::Eq: return R(Rel::Eq, budiv(s, budiv(s, t)), t);
          case Rel::Ne:
            if (w == 1) return R(Rel::Eq, band(s, t), zero(s));
            return st.tru();
          case Rel::Ult:
            return And2(R(Rel::Ult, zero(t), bnot(band(bneg(t), s))),
                        R(Rel::Ult, zero(t), t));
          case Rel::Ugt: return R(Rel::Ult, t, ones(t));
          case Rel::Ule: return R(Rel::Ult, zero(s), bor(bnot(s), t));
          case Rel::Uge: return st.tru();
          case Rel::Slt:
            return Or2(R(Rel::Slt, s, t), R(Rel::Sge, t, zero(t)));
          case Rel::Sgt:
            if (w == 1) return R(Rel::Sgt, s, t);
            return And2(
                Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sgt, s, t)),
                Imp(R(Rel::Slt, s, zero(s)),
                    R(Rel::Sgt, blshr(s, st.one(s->sort.width())), t)));
          case Rel::Sle:
            return Or2(R(Rel::Sge, t, ones(t)), R(Rel::Sge, t, s));
          case Rel::Sge:
            if (w == 1) return R(Rel::Sge, s, t);
            return And2(
                Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sge, s, t)),
                Imp(R(Rel::Slt, s, zero(s)),
                    R(Rel::Sge, blshr(s, st.one(s->sort.width())), t)));
        }
      }
      break;

    case IcOp::And:
      switch (rel) {
        case Rel::Eq: return R(Rel::Eq, band(t, s), t);
        case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, zero(t)));
        case Rel::Ult: return st.ne(t, zero(t));
        case Rel::Ugt: return R(Rel::Ult, t, s);
        case Rel::Ule: return st.tru();
        case Rel::Uge: return R(Rel::Uge, s, t);
        case Rel::Slt: return R(Rel::Slt, band(bnot(bneg(t)), s), t);
        case Rel::Sgt: return R(Rel::Slt, t, band(s, maxs(s)));
        case Rel::Sle: return R(Rel::Uge, s, band(t, mins(t)));
        case Rel::Sge:
          return Or2(R(Rel::Eq, band(s, t), t),
                     R(Rel::Slt, t, band(bsub(t, s), s)));
      }
      break;

    case IcOp::Or:
      switch (rel) {
        case Rel::Eq: return R(Rel::Eq, bor(t, s), t);
        case Rel::Ne: return Or2(st.ne(s, ones(s)), st.ne(t, ones(t)));
        case Rel::Ult: return R(Rel::Ult, s, t);
        case Rel::Ugt: return R(Rel::Ult, t, ones(t));
        case Rel::Ule: return R(Rel::Uge, t, s);
        case Rel::Uge: return st.tru();
        case Rel::Slt: return R(Rel::Slt, bor(bnot(bsub(s, t)), s), t);
        case Rel::Sgt: return R(Rel::Slt, t, bor(s, maxs(s)));
        case Rel::Sle: return R(Rel::Sge, t, bor(s, mins(s)));
        case Rel::Sge: return R(Rel::Sge, bor(s, maxs(s)), t);
      }
      break;

    case IcOp::Lshr:
      if (key.side == IcSide::Left) {
        switch (rel) {
          case Rel::Eq: return R(Rel::Eq, blshr(bshl(t, s), s), t);
          case Rel::Ne:
            return Or2(st.ne(t, zero(t)), R(Rel::Ult, s, kappa(s)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, blshr(bnot(s), s));
          case Rel::Ule: return st.tru();
          case Rel::Uge: return R(Rel::Eq, blshr(bshl(t, s), s), t);
          case Rel::Slt: return R(Rel::Slt, blshr(bnot(bneg(t)), s), t);
          case Rel::Sgt: return R(Rel::Slt, t, blshr(bshl(maxs(s), s), s));
          case Rel::Sle: return R(Rel::Sge, t, blshr(t, s));
          case Rel::Sge:
            return Imp(st.ne(s, zero(s)),
                       R(Rel::Sge, blshr(ones(s), s), t));
        }
      } else {
        switch (rel) {
          case Rel::Eq: return shift_family(BvOp::Lshr, Rel::Eq);
          case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, zero(t)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, s);
          case Rel::Ule: return st.tru();
          case Rel::Uge: return R(Rel::Uge, s, t);
          case Rel::Slt:
            return Or2(R(Rel::Slt, s, t), R(Rel::Slt, zero(t), t));
          case Rel::Sgt:
            return And2(
                Imp(R(Rel::Slt, s, zero(s)),
                    R(Rel::Sgt, blshr(s, st.one(s->sort.width())), t)),
                Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sgt, s, t)));
          case Rel::Sle:
            return Or2(R(Rel::Ult, t, mins(t)), R(Rel::Sge, t, s));
          case Rel::Sge:
            return And2(
                Imp(R(Rel::Slt, s, zero(s)),
                    R(Rel::Sge, blshr(s, st.one(s->sort.width())), t)),
                Imp(R(Rel::Sge, s, zero(s)), R(Rel::Sge, s, t)));
        }
      }
      break;

    case IcOp::Ashr:
      if (key.side == IcSide::Left) {
        switch (rel) {
          case Rel::Eq:
            return And2(
                Imp(R(Rel::Ult, s, kappa(s)),
                    R(Rel::Eq, bashr(bshl(t, s), s), t)),
                Imp(R(Rel::Uge, s, kappa(s)),
                    Or2(st.eq(t, ones(t)), st.eq(t, zero(t)))));
          case Rel::Ne: return st.tru();
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, ones(t));
          case Rel::Ule: return st.tru();
          case Rel::Uge: return st.tru();
          case Rel::Slt: return R(Rel::Slt, bashr(mins(s), s), t);
          case Rel::Sgt: return R(Rel::Slt, t, blshr(maxs(s), s));
          case Rel::Sle: return R(Rel::Sge, t, bnot(blshr(maxs(s), s)));
          case Rel::Sge: return R(Rel::Sge, blshr(maxs(s), s), t);
        }
      } else {
        switch (rel) {
          case Rel::Eq: return shift_family(BvOp::Ashr, Rel::Eq);
          case Rel::Ne:
            return And2(Or2(st.ne(t, zero(t)), st.ne(s, zero(s))),
                        Or2(st.ne(t, ones(t)), st.ne(s, ones(s))));
          case Rel::Ult:
            return And2(Or2(R(Rel::Ult, s, t), R(Rel::Sge, s, zero(s))),
                        st.ne(t, zero(t)));
          case Rel::Ugt:
            return Or2(R(Rel::Slt, s, blshr(s, bnot(t))),
                       R(Rel::Ult, t, s));
          case Rel::Ule:
            return Or2(R(Rel::Ult, s, mins(s)), R(Rel::Uge, t, s));
          case Rel::Uge:
            return Or2(R(Rel::Uge, s, bnot(s)), R(Rel::Uge, s, t));
          case Rel::Slt:
            return Or2(R(Rel::Slt, s, t), R(Rel::Slt, zero(t), t));
          case Rel::Sgt:
            return And2(R(Rel::Slt, t, band(s, maxs(s))),
                        R(Rel::Slt, t, bor(s, maxs(s))));
          case Rel::Sle:
            return Or2(R(Rel::Sge, t, zero(t)), R(Rel::Sge, t, s));
          case Rel::Sge:
            return Or2(R(Rel::Uge, t, bnot(t)), R(Rel::Sge, s, t));
        }
      }
      break;

    case IcOp::Shl:
      if (key.side == IcSide::Left) {
        switch (rel) {
          case Rel::Eq: return R(Rel::Eq, bshl(blshr(t, s), s), t);
          case Rel::Ne:
            return Or2(st.ne(t, zero(t)), R(Rel::Ult, s, kappa(s)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return R(Rel::Ult, t, bshl(ones(s), s));
          case Rel::Ule: return st.tru();
          case Rel::Uge: return R(Rel::Uge, bshl(ones(s), s), t);
          case Rel::Slt: return R(Rel::Slt, bshl(blshr(mins(s), s), s), t);
          case Rel::Sgt:
            return R(Rel::Slt, t, band(bshl(maxs(s), s), maxs(s)));
          case Rel::Sle:
            return R(Rel::Ult, blshr(t, blshr(t, s)), mins(t));
          case Rel::Sge:
            return R(Rel::Sge, band(bshl(maxs(s), s), maxs(s)), t);
        }
      } else {
        switch (rel) {
          case Rel::Eq: return shift_family(BvOp::Shl, Rel::Eq);
          case Rel::Ne: return Or2(st.ne(s, zero(s)), st.ne(t, zero(t)));
          case Rel::Ult: return st.ne(t, zero(t));
          case Rel::Ugt: return shift_family(BvOp::Shl, Rel::Ugt);
          case Rel::Ule: return st.tru();
          case Rel::Uge: return shift_family(BvOp::Shl, Rel::Uge);
          case Rel::Slt:
            return R(Rel::Ult, bshl(mins(s), s), badd(t, mins(t)));
          case Rel::Sgt: return shift_family(BvOp::Shl, Rel::Sgt);
          case Rel::Sle: return R(Rel::Ult, blshr(t, s), mins(t));
          case Rel::Sge: return shift_family(BvOp::Shl, Rel::Sge);
        }
      }
      break;

    case IcOp::Concat: {
      uint32_t tw = t->sort.width();
      if (key.side == IcSide::Left) {
        // l[x] = x . s R t
        uint32_t sw = s->sort.width();
        Term tx = store_.extract(t, tw - 1, tw - w);  // high kappa(x) bits
        Term ts = store_.extract(t, sw - 1, 0);
        switch (rel) {
          case Rel::Eq: return st.eq(s, ts);
          case Rel::Ne: return st.tru();
          case Rel::Ult:
            return Imp(st.eq(tx, zero(tx)), R(Rel::Ult, s, ts));
          case Rel::Ugt:
            return Imp(st.eq(tx, ones(tx)), R(Rel::Ugt, s, ts));
          case Rel::Ule:
            return Imp(st.eq(tx, zero(tx)), R(Rel::Ule, s, ts));
          case Rel::Uge:
            return Imp(st.eq(tx, ones(tx)), R(Rel::Uge, s, ts));
          case Rel::Slt:
            return Imp(st.eq(tx, mins(tx)), R(Rel::Ult, s, ts));
          case Rel::Sgt:
            return Imp(st.eq(tx, maxs(tx)), R(Rel::Ugt, s, ts));
          case Rel::Sle:
            return Imp(st.eq(tx, mins(tx)), R(Rel::Ule, s, ts));
          case Rel::Sge:
            return Imp(st.eq(tx, maxs(tx)), R(Rel::Uge, s, ts));
        }
      } else {
        // l[x] = s . x R t
        uint32_t sw = s->sort.width();
        Term tx = store_.extract(t, w - 1, 0);  // low kappa(x) bits
        Term ts = store_.extract(t, tw - 1, tw - sw);
        switch (rel) {
          case Rel::Eq: return st.eq(s, ts);
          case Rel::Ne: return st.tru();
          case Rel::Ult:
            return And2(R(Rel::Ule, s, ts),
                        Imp(st.eq(s, ts), st.ne(tx, zero(tx))));
          case Rel::Ugt:
            return And2(R(Rel::Uge, s, ts),
                        Imp(st.eq(s, ts), st.ne(tx, ones(tx))));
          case Rel::Ule: return R(Rel::Ule, s, ts);
          case Rel::Uge: return R(Rel::Uge, s, ts);
          case Rel::Slt:
            return And2(R(Rel::Sle, s, ts),
                        Imp(st.eq(s, ts), st.ne(tx, zero(tx))));
          case Rel::Sgt:
            return And2(R(Rel::Sge, s, ts),
                        Imp(st.eq(s, ts), st.ne(tx, ones(tx))));
          case Rel::Sle: return R(Rel::Sle, s, ts);
          case Rel::Sge: return R(Rel::Sge, s, ts);
        }
      }
      break;
    }
  }
  throw UnsupportedError("no catalog row for " + to_string(key));
}

namespace {

struct LitShape {
  IcKey key;
  Term s;  // nullptr for unary/base rows
  Term t;
  uint32_t x_width;
};

LitShape decompose(VarId x, Term lit) {
  if (lit->kind != Kind::Relation)
    throw PreconditionError("expected an atomic relation");
  Term lhs = lit->kids[0];
  Term rhs = lit->kids[1];
  Rel rel = lit->rel;
  uint64_t in_lhs = occurrences(x, lhs);
  uint64_t in_rhs = occurrences(x, rhs);
  if (in_lhs + in_rhs != 1)
    throw PreconditionError("literal is not linear in the solved variable");
  if (in_rhs) {
    std::swap(lhs, rhs);
    rel = converse(rel);
  }
  // lhs now holds the side containing x; rhs is t.
  LitShape shape{};
  shape.key.rel = rel;
  shape.t = rhs;

  if (lhs->kind == Kind::Var && lhs->var == x) {
    shape.key.op = IcOp::BaseX;
    shape.key.side = IcSide::Unary;
    shape.x_width = lhs->sort.width();
    return shape;
  }
  if (lhs->kind != Kind::BvOperator)
    throw UnsupportedError("literal shape outside the catalog");

  auto is_x = [&](Term k) { return k->kind == Kind::Var && k->var == x; };

  if (lhs->op == BvOp::Not || lhs->op == BvOp::Neg) {
    if (!is_x(lhs->kids[0]))
      throw UnsupportedError("solved variable is not a direct operand");
    shape.key.op = lhs->op == BvOp::Not ? IcOp::Not : IcOp::Neg;
    shape.key.side = IcSide::Unary;
    shape.x_width = lhs->kids[0]->sort.width();
    return shape;
  }
  if (lhs->op == BvOp::Extract) {
    if (!is_x(lhs->kids[0]))
      throw UnsupportedError("solved variable is not a direct operand");
    shape.key.op = IcOp::Extract;
    shape.key.side = IcSide::Unary;
    shape.x_width = lhs->kids[0]->sort.width();
    return shape;
  }

  bool x_left = is_x(lhs->kids[0]);
  bool x_right = is_x(lhs->kids[1]);
  if (!x_left && !x_right)
    throw UnsupportedError("solved variable is not a direct operand");
  shape.s = x_left ? lhs->kids[1] : lhs->kids[0];
  shape.x_width = (x_left ? lhs->kids[0] : lhs->kids[1])->sort.width();
  switch (lhs->op) {
    case BvOp::Add: shape.key.op = IcOp::Add; break;
    case BvOp::Mul: shape.key.op = IcOp::Mul; break;
    case BvOp::And: shape.key.op = IcOp::And; break;
    case BvOp::Or: shape.key.op = IcOp::Or; break;
    case BvOp::Urem: shape.key.op = IcOp::Urem; break;
    case BvOp::Udiv: shape.key.op = IcOp::Udiv; break;
    case BvOp::Lshr: shape.key.op = IcOp::Lshr; break;
    case BvOp::Ashr: shape.key.op = IcOp::Ashr; break;
    case BvOp::Shl: shape.key.op = IcOp::Shl; break;
    case BvOp::Concat: shape.key.op = IcOp::Concat; break;
    default:
      throw UnsupportedError("operator outside the catalog");
  }
  if (is_commutative(lhs->op))
    shape.key.side = IcSide::Left;
  else
    shape.key.side = x_left ? IcSide::Left : IcSide::Right;
  return shape;
}

}  // namespace

Term IcCatalog::get_ic(VarId x, Term lit) const {
  LitShape shape = decompose(x, lit);
  if (shape.s != nullptr && occurs_free(x, shape.s))
    throw PreconditionError("literal is not linear in the solved variable");
  if (occurs_free(x, shape.t))
    throw PreconditionError("solved variable occurs on both sides");
  Term cond = condition(shape.key, shape.s, shape.t, shape.x_width);
  return cond;
}

std::optional<Term> IcCatalog::get_inverse(VarId x, Term lit) const {
  if (lit->kind != Kind::Relation || lit->rel != Rel::Eq) return std::nullopt;
  LitShape shape = decompose(x, lit);
  if ((shape.s && occurs_free(x, shape.s)) || occurs_free(x, shape.t))
    return std::nullopt;
  TermStore& st = store_;
  switch (shape.key.op) {
    case IcOp::BaseX: return shape.t;
    case IcOp::Neg: return st.neg(shape.t);
    case IcOp::Not: return st.bnot(shape.t);
    case IcOp::Add: return st.sub(shape.t, shape.s);
    case IcOp::Mul:
      if (shape.s->kind == Kind::BvConst && shape.s->bits.is_odd())
        return st.mul(shape.t, st.bv_const(bv_mul_inverse_odd(shape.s->bits)));
      return std::nullopt;
    default: return std::nullopt;
  }
}

std::vector<IcKey> IcCatalog::entries() const {
  std::vector<IcKey> keys;
  auto push_all = [&](IcOp op, IcSide side) {
    for (Rel r : kAllRels) keys.push_back(IcKey{op, side, r});
  };
  push_all(IcOp::BaseX, IcSide::Unary);
  push_all(IcOp::Not, IcSide::Unary);
  push_all(IcOp::Neg, IcSide::Unary);
  push_all(IcOp::Add, IcSide::Left);
  push_all(IcOp::Extract, IcSide::Unary);
  push_all(IcOp::Mul, IcSide::Left);
  push_all(IcOp::And, IcSide::Left);
  push_all(IcOp::Or, IcSide::Left);
  for (IcOp op : {IcOp::Urem, IcOp::Udiv, IcOp::Lshr, IcOp::Ashr, IcOp::Shl,
                  IcOp::Concat}) {
    push_all(op, IcSide::Left);
    push_all(op, IcSide::Right);
  }
  return keys;
}

Width1Kind IcCatalog::width1_kind(IcKey key) const {
  if (key.op == IcOp::Udiv && key.side == IcSide::Right) {
    if (key.rel == Rel::Ne || key.rel == Rel::Sgt) return Width1Kind::CaseSplit;
    if (key.rel == Rel::Sge) return Width1Kind::DerivedOverride;
  }
  return Width1Kind::None;
}

}  // namespace qbv
