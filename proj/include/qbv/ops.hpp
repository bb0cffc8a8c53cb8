#pragma once

#include <cstdint>

#include "qbv/bitvec.hpp"

namespace qbv {

// Bit-vector operators. Extract carries its indices on the term node.
enum class BvOp : uint8_t {
  Not,
  Neg,
  And,
  Or,
  Shl,
  Lshr,
  Ashr,
  Add,
  Mul,
  Udiv,
  Urem,
  Concat,
  Extract,
};

// Atomic relations over bit-vectors.
enum class Rel : uint8_t { Eq, Ne, Ult, Ugt, Ule, Uge, Slt, Sgt, Sle, Sge };

inline constexpr int kRelCount = 10;

// not (a R b) == a complement(R) b
Rel complement(Rel r);
// (a R b) == (b converse(R) a)
Rel converse(Rel r);

const char* smtlib_name(BvOp op);
// Eq prints as "=", Ne as "distinct".
const char* smtlib_name(Rel r);

bool is_unary(BvOp op);
bool is_commutative(BvOp op);

// Value-level dispatch over the operator enums.
BitVec eval_unop(BvOp op, const BitVec& a);
BitVec eval_binop(BvOp op, const BitVec& a, const BitVec& b);
bool eval_cmp(Rel r, const BitVec& a, const BitVec& b);

}  // namespace qbv
