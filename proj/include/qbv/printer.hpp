#pragma once

#include <string>

#include "qbv/term.hpp"

namespace qbv {

// SMT-LIB 2 concrete syntax. Round-trips with the front-end parser on the
// supported fragment; choice binders print as a non-standard (choice ...)
// form for diagnostics only.
std::string to_smtlib(const TermStore& store, Term t);

std::string sort_smtlib(Sort s);

// "(define-fun name () sort value)" lines for every entry, in id order.
std::string model_smtlib(const TermStore& store, const Interpretation& interp);

}  // namespace qbv
