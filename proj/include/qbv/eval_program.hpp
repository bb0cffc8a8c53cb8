#pragma once

#include <cstdint>
#include <vector>

#include "qbv/term.hpp"

namespace qbv {

// Allocation-free evaluator for quantifier-free, choice-free terms over a
// fixed slot layout. Used by the exhaustive verifier, which runs millions
// of evaluations per catalog row; semantics agree with evaluate() and are
// cross-checked against it in the test suite.
class EvalProgram {
 public:
  // slots[i] supplies the value of that variable at run([v0, v1, ...]).
  static EvalProgram compile(Term t, const std::vector<VarId>& slots);

  // Bit-vector roots return the masked value, Boolean roots 0 or 1.
  uint64_t run(const uint64_t* slot_values) const;

  size_t stack_depth() const { return max_depth_; }

 private:
  struct Instr {
    uint8_t code;
    uint8_t w;     // operand/result width where needed
    uint32_t aux;  // slot index, extract lo, or concat low width
    uint64_t imm;  // constants
  };
  std::vector<Instr> instrs_;
  size_t max_depth_ = 0;
};

}  // namespace qbv
