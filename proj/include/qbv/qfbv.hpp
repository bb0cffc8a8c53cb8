#pragma once

#include <string>

#include "qbv/bitblast.hpp"
#include "qbv/term.hpp"

namespace qbv {

struct GroundVerdict {
  enum class Kind { Sat, Unsat, ResourceOut } kind = Kind::ResourceOut;
  Interpretation model;  // total on the formula's free variables when Sat
  std::string diagnostic;
  uint64_t conflicts = 0;
};

struct CheckOptions {
  uint64_t conflict_budget = UINT64_MAX;
  uint64_t seed = 0;
  // enumerate_check refuses state spaces beyond this many assignments.
  uint64_t enum_state_cap = uint64_t{1} << 24;
};

// Bit-blasting + CDCL. Sat models are re-evaluated against the formula
// before being returned.
GroundVerdict check(const TermStore& store, Term phi,
                    const CheckOptions& opts = {});

// Exhaustive reference oracle over all free-variable assignments.
GroundVerdict enumerate_check(const TermStore& store, Term phi,
                              const CheckOptions& opts = {});

// Pipes an SMT-LIB 2 script (set-logic QF_BV, declarations, one assert,
// check-sat, get-model) through an external command and parses the
// response. Process or parse failures surface as ResourceOut.
GroundVerdict external_check(const TermStore& store, Term phi,
                             const std::string& command,
                             const CheckOptions& opts = {});

enum class BackendKind { BitBlast, Enumerate, External };

struct Backend {
  BackendKind kind = BackendKind::BitBlast;
  std::string external_cmd;
};

GroundVerdict ground_check(const TermStore& store, Term phi,
                           const Backend& backend,
                           const CheckOptions& opts = {});

}  // namespace qbv
