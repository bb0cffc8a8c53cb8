#pragma once

#include <unordered_map>
#include <vector>

#include "qbv/sat.hpp"
#include "qbv/term.hpp"

namespace qbv {

struct BitBlastResult {
  Cnf cnf;
  // Free bit-vector variables to their bit literals, LSB first.
  std::unordered_map<uint32_t, std::vector<int>> bv_bits;
  // Free Boolean variables to their literal.
  std::unordered_map<uint32_t, int> bool_lits;
};

// Structural reduction of a quantifier-free, choice-free Boolean term to
// an equisatisfiable CNF: ripple-carry adders, shift-add multiplication,
// barrel shifters, restoring division (with the total division
// convention), Tseitin encoding of the Boolean skeleton.
BitBlastResult bitblast(Term phi);

}  // namespace qbv
