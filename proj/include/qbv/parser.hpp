#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qbv/term.hpp"

namespace qbv {

// A parsed SMT-LIB 2 script over the quantified bit-vector fragment:
// set-logic BV or QF_BV, zero-ary declarations, assertions, check-sat.
struct Script {
  std::string logic;
  std::vector<VarId> consts;  // in declaration order
  std::vector<Term> assertions;
  bool check_sat = false;
  bool get_model = false;
};

// Throws ParseError with 1-based line/column on any input outside the
// supported fragment.
Script parse_script(TermStore& store, std::string_view text);

}  // namespace qbv
