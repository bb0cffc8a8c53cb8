#include "qbv/eval_program.hpp"

namespace qbv {

namespace {

enum Code : uint8_t {
  C_CONST,
  C_LOAD,
  C_BVNOT,
  C_BVNEG,
  C_BVAND,
  C_BVOR,
  C_BVSHL,
  C_BVLSHR,
  C_BVASHR,
  C_BVADD,
  C_BVMUL,
  C_BVUDIV,
  C_BVUREM,
  C_CONCAT,
  C_EXTRACT,
  C_EQ,
  C_NE,
  C_ULT,
  C_UGT,
  C_ULE,
  C_UGE,
  C_SLT,
  C_SGT,
  C_SLE,
  C_SGE,
  C_NOT,
  C_AND,
  C_OR,
  C_IMPLIES,
  C_IFF,
  C_ITE,
};

inline uint64_t mask_w(uint32_t w) { return BitVec::mask_of(w); }

inline int64_t sext(uint64_t v, uint32_t w) {
  uint64_t sign = uint64_t{1} << (w - 1);
  return static_cast<int64_t>((v ^ sign) - sign);
}

}  // namespace

EvalProgram EvalProgram::compile(Term t, const std::vector<VarId>& slots) {
  EvalProgram prog;
  size_t depth = 0;

  auto push_instr = [&](Instr i, size_t pops) {
    depth = depth - pops + 1;
    prog.max_depth_ = std::max(prog.max_depth_, depth);
    prog.instrs_.push_back(i);
  };

  struct Frame {
    Term t;
    bool emitted;
  };
  std::vector<Frame> todo{{t, false}};
  while (!todo.empty()) {
    Frame f = todo.back();
    todo.pop_back();
    Term n = f.t;
    if (!f.emitted) {
      todo.push_back({n, true});
      // Children are compiled left to right, so they are popped in
      // reverse at execution time.
      for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it)
        todo.push_back({*it, false});
      continue;
    }
    switch (n->kind) {
      case Kind::BvConst:
        push_instr({C_CONST, 0, 0, n->bits.value()}, 0);
        break;
      case Kind::BoolConst:
        push_instr({C_CONST, 0, 0, n->bval ? uint64_t{1} : 0}, 0);
        break;
      case Kind::Var: {
        uint32_t slot = UINT32_MAX;
        for (size_t i = 0; i < slots.size(); ++i)
          if (slots[i] == n->var) slot = static_cast<uint32_t>(i);
        if (slot == UINT32_MAX)
          throw SortError("EvalProgram: variable without a slot");
        push_instr({C_LOAD, 0, slot, 0}, 0);
        break;
      }
      case Kind::BvOperator: {
        uint8_t w = static_cast<uint8_t>(n->kids[0]->sort.width());
        switch (n->op) {
          case BvOp::Not: push_instr({C_BVNOT, w, 0, 0}, 1); break;
          case BvOp::Neg: push_instr({C_BVNEG, w, 0, 0}, 1); break;
          case BvOp::And: push_instr({C_BVAND, w, 0, 0}, 2); break;
          case BvOp::Or: push_instr({C_BVOR, w, 0, 0}, 2); break;
          case BvOp::Shl: push_instr({C_BVSHL, w, 0, 0}, 2); break;
          case BvOp::Lshr: push_instr({C_BVLSHR, w, 0, 0}, 2); break;
          case BvOp::Ashr: push_instr({C_BVASHR, w, 0, 0}, 2); break;
          case BvOp::Add: push_instr({C_BVADD, w, 0, 0}, 2); break;
          case BvOp::Mul: push_instr({C_BVMUL, w, 0, 0}, 2); break;
          case BvOp::Udiv: push_instr({C_BVUDIV, w, 0, 0}, 2); break;
          case BvOp::Urem: push_instr({C_BVUREM, w, 0, 0}, 2); break;
          case BvOp::Concat:
            push_instr({C_CONCAT, w, n->kids[1]->sort.width(), 0}, 2);
            break;
          case BvOp::Extract:
            push_instr({C_EXTRACT,
                        static_cast<uint8_t>(n->hi - n->lo + 1), n->lo, 0},
                       1);
            break;
        }
        break;
      }
      case Kind::Relation: {
        uint8_t w = static_cast<uint8_t>(n->kids[0]->sort.width());
        switch (n->rel) {
          case Rel::Eq: push_instr({C_EQ, w, 0, 0}, 2); break;
          case Rel::Ne: push_instr({C_NE, w, 0, 0}, 2); break;
          case Rel::Ult: push_instr({C_ULT, w, 0, 0}, 2); break;
          case Rel::Ugt: push_instr({C_UGT, w, 0, 0}, 2); break;
          case Rel::Ule: push_instr({C_ULE, w, 0, 0}, 2); break;
          case Rel::Uge: push_instr({C_UGE, w, 0, 0}, 2); break;
          case Rel::Slt: push_instr({C_SLT, w, 0, 0}, 2); break;
          case Rel::Sgt: push_instr({C_SGT, w, 0, 0}, 2); break;
          case Rel::Sle: push_instr({C_SLE, w, 0, 0}, 2); break;
          case Rel::Sge: push_instr({C_SGE, w, 0, 0}, 2); break;
        }
        break;
      }
      case Kind::Not:
        push_instr({C_NOT, 0, 0, 0}, 1);
        break;
      case Kind::And:
        for (size_t i = 1; i < n->kids.size(); ++i)
          push_instr({C_AND, 0, 0, 0}, 2);
        break;
      case Kind::Or:
        for (size_t i = 1; i < n->kids.size(); ++i)
          push_instr({C_OR, 0, 0, 0}, 2);
        break;
      case Kind::Implies:
        push_instr({C_IMPLIES, 0, 0, 0}, 2);
        break;
      case Kind::Iff:
        push_instr({C_IFF, 0, 0, 0}, 2);
        break;
      case Kind::Ite:
        push_instr({C_ITE, 0, 0, 0}, 3);
        break;
      default:
        throw PreconditionError(
            "EvalProgram: quantifiers and choice are not supported");
    }
  }
  if (prog.max_depth_ > 64)
    throw ResourceError("EvalProgram: term too deep for the value stack");
  return prog;
}

uint64_t EvalProgram::run(const uint64_t* slot_values) const {
  uint64_t stack[64];
  size_t sp = 0;
  for (const Instr& in : instrs_) {
    switch (in.code) {
      case C_CONST: stack[sp++] = in.imm; break;
      case C_LOAD: stack[sp++] = slot_values[in.aux]; break;
      case C_BVNOT: stack[sp - 1] = ~stack[sp - 1] & mask_w(in.w); break;
      case C_BVNEG: stack[sp - 1] = (~stack[sp - 1] + 1) & mask_w(in.w); break;
      case C_BVAND: --sp; stack[sp - 1] &= stack[sp]; break;
      case C_BVOR: --sp; stack[sp - 1] |= stack[sp]; break;
      case C_BVSHL: {
        --sp;
        uint64_t b = stack[sp];
        stack[sp - 1] =
            b >= in.w ? 0 : (stack[sp - 1] << b) & mask_w(in.w);
        break;
      }
      case C_BVLSHR: {
        --sp;
        uint64_t b = stack[sp];
        stack[sp - 1] = b >= in.w ? 0 : stack[sp - 1] >> b;
        break;
      }
      case C_BVASHR: {
        --sp;
        uint64_t b = stack[sp];
        uint64_t a = stack[sp - 1];
        bool sign = (a >> (in.w - 1)) & 1;
        if (b >= in.w) {
          stack[sp - 1] = sign ? mask_w(in.w) : 0;
        } else {
          uint64_t r = a >> b;
          if (sign) r |= mask_w(in.w) & ~(mask_w(in.w) >> b);
          stack[sp - 1] = r;
        }
        break;
      }
      case C_BVADD:
        --sp;
        stack[sp - 1] = (stack[sp - 1] + stack[sp]) & mask_w(in.w);
        break;
      case C_BVMUL:
        --sp;
        stack[sp - 1] = (stack[sp - 1] * stack[sp]) & mask_w(in.w);
        break;
      case C_BVUDIV:
        --sp;
        stack[sp - 1] =
            stack[sp] == 0 ? mask_w(in.w) : stack[sp - 1] / stack[sp];
        break;
      case C_BVUREM:
        --sp;
        if (stack[sp] != 0) stack[sp - 1] %= stack[sp];
        break;
      case C_CONCAT:
        --sp;
        stack[sp - 1] = (stack[sp - 1] << in.aux) | stack[sp];
        break;
      case C_EXTRACT:
        stack[sp - 1] = (stack[sp - 1] >> in.aux) & mask_w(in.w);
        break;
      case C_EQ: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp]; break;
      case C_NE: --sp; stack[sp - 1] = stack[sp - 1] != stack[sp]; break;
      case C_ULT: --sp; stack[sp - 1] = stack[sp - 1] < stack[sp]; break;
      case C_UGT: --sp; stack[sp - 1] = stack[sp - 1] > stack[sp]; break;
      case C_ULE: --sp; stack[sp - 1] = stack[sp - 1] <= stack[sp]; break;
      case C_UGE: --sp; stack[sp - 1] = stack[sp - 1] >= stack[sp]; break;
      case C_SLT:
        --sp;
        stack[sp - 1] = sext(stack[sp - 1], in.w) < sext(stack[sp], in.w);
        break;
      case C_SGT:
        --sp;
        stack[sp - 1] = sext(stack[sp - 1], in.w) > sext(stack[sp], in.w);
        break;
      case C_SLE:
        --sp;
        stack[sp - 1] = sext(stack[sp - 1], in.w) <= sext(stack[sp], in.w);
        break;
      case C_SGE:
        --sp;
        stack[sp - 1] = sext(stack[sp - 1], in.w) >= sext(stack[sp], in.w);
        break;
      case C_NOT: stack[sp - 1] ^= 1; break;
      case C_AND: --sp; stack[sp - 1] &= stack[sp]; break;
      case C_OR: --sp; stack[sp - 1] |= stack[sp]; break;
      case C_IMPLIES:
        --sp;
        stack[sp - 1] = (stack[sp - 1] ^ 1) | stack[sp];
        break;
      case C_IFF: --sp; stack[sp - 1] = stack[sp - 1] == stack[sp]; break;
      case C_ITE:
        sp -= 2;
        stack[sp - 1] = stack[sp - 1] ? stack[sp] : stack[sp + 1];
        break;
    }
  }
  return stack[0];
}

}  // namespace qbv
