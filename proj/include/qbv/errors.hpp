#pragma once

#include <stdexcept>
#include <string>

namespace qbv {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ill-sorted construction or use: width mismatch, bad extract indices,
// missing assignment in an interpretation.
struct SortError : Error {
  using Error::Error;
};

// A documented precondition was violated (nonlinear literal, even input
// to the odd multiplicative inverse, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// Input or request outside the supported fragment (catalog miss,
// quantifier nesting beyond one alternation, unknown SMT-LIB command).
struct UnsupportedError : Error {
  using Error::Error;
};

// A configured resource cap was exceeded (evaluation width cap,
// conflict budget, instantiation budget, enumeration cap).
struct ResourceError : Error {
  using Error::Error;
};

// Front-end syntax error with source position (1-based).
struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " at line " + std::to_string(line_) + " column " +
              std::to_string(col_)),
        line(line_),
        col(col_) {}
};

}  // namespace qbv
