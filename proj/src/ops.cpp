#include "qbv/ops.hpp"

namespace qbv {

Rel complement(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Ne;
    case Rel::Ne: return Rel::Eq;
    case Rel::Ult: return Rel::Uge;
    case Rel::Ugt: return Rel::Ule;
    case Rel::Ule: return Rel::Ugt;
    case Rel::Uge: return Rel::Ult;
    case Rel::Slt: return Rel::Sge;
    case Rel::Sgt: return Rel::Sle;
    case Rel::Sle: return Rel::Sgt;
    case Rel::Sge: return Rel::Slt;
  }
  throw Error("bad relation");
}

Rel converse(Rel r) {
  switch (r) {
    case Rel::Eq: return Rel::Eq;
    case Rel::Ne: return Rel::Ne;
    case Rel::Ult: return Rel::Ugt;
    case Rel::Ugt: return Rel::Ult;
    case Rel::Ule: return Rel::Uge;
    case Rel::Uge: return Rel::Ule;
    case Rel::Slt: return Rel::Sgt;
    case Rel::Sgt: return Rel::Slt;
    case Rel::Sle: return Rel::Sge;
    case Rel::Sge: return Rel::Sle;
  }
  throw Error("bad relation");
}

const char* smtlib_name(BvOp op) {
  switch (op) {
    case BvOp::Not: return "bvnot";
    case BvOp::Neg: return "bvneg";
    case BvOp::And: return "bvand";
    case BvOp::Or: return "bvor";
    case BvOp::Shl: return "bvshl";
    case BvOp::Lshr: return "bvlshr";
    case BvOp::Ashr: return "bvashr";
    case BvOp::Add: return "bvadd";
    case BvOp::Mul: return "bvmul";
    case BvOp::Udiv: return "bvudiv";
    case BvOp::Urem: return "bvurem";
    case BvOp::Concat: return "concat";
    case BvOp::Extract: return "extract";
  }
  throw Error("bad operator");
}

const char* smtlib_name(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "distinct";
    case Rel::Ult: return "bvult";
    case Rel::Ugt: return "bvugt";
    case Rel::Ule: return "bvule";
    case Rel::Uge: return "bvuge";
    case Rel::Slt: return "bvslt";
    case Rel::Sgt: return "bvsgt";
    case Rel::Sle: return "bvsle";
    case Rel::Sge: return "bvsge";
  }
  throw Error("bad relation");
}

bool is_unary(BvOp op) {
  return op == BvOp::Not || op == BvOp::Neg || op == BvOp::Extract;
}

bool is_commutative(BvOp op) {
  return op == BvOp::And || op == BvOp::Or || op == BvOp::Add ||
         op == BvOp::Mul;
}

BitVec eval_unop(BvOp op, const BitVec& a) {
  switch (op) {
    case BvOp::Not: return bv_not(a);
    case BvOp::Neg: return bv_neg(a);
    default: throw SortError("eval_unop: not a unary operator");
  }
}

BitVec eval_binop(BvOp op, const BitVec& a, const BitVec& b) {
  switch (op) {
    case BvOp::And: return bv_and(a, b);
    case BvOp::Or: return bv_or(a, b);
    case BvOp::Shl: return bv_shl(a, b);
    case BvOp::Lshr: return bv_lshr(a, b);
    case BvOp::Ashr: return bv_ashr(a, b);
    case BvOp::Add: return bv_add(a, b);
    case BvOp::Mul: return bv_mul(a, b);
    case BvOp::Udiv: return bv_udiv(a, b);
    case BvOp::Urem: return bv_urem(a, b);
    case BvOp::Concat: return bv_concat(a, b);
    default: throw SortError("eval_binop: not a binary operator");
  }
}

bool eval_cmp(Rel r, const BitVec& a, const BitVec& b) {
  switch (r) {
    case Rel::Eq: return a == b;
    case Rel::Ne: return !(a == b);
    case Rel::Ult: return bv_ult(a, b);
    case Rel::Ugt: return bv_ugt(a, b);
    case Rel::Ule: return bv_ule(a, b);
    case Rel::Uge: return bv_uge(a, b);
    case Rel::Slt: return bv_slt(a, b);
    case Rel::Sgt: return bv_sgt(a, b);
    case Rel::Sle: return bv_sle(a, b);
    case Rel::Sge: return bv_sge(a, b);
  }
  throw Error("bad relation");
}

}  // namespace qbv
