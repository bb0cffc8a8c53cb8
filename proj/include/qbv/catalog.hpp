#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbv/term.hpp"

namespace qbv {

// Shape of a literal solved for x: the operator applied to x, which side
// x sits on, and the relation. Commutative operators (bvmul, bvand, bvor,
// bvadd) are canonicalized to the left side.
enum class IcOp : uint8_t {
  BaseX,    // x R t
  Not,      // ~x R t
  Neg,      // -x R t
  Add,      // x + s R t
  Mul,      // x * s R t
  Urem,     // x mod s / s mod x
  Udiv,     // x div s / s div x
  And,      // x & s R t
  Or,       // x | s R t
  Lshr,     // x >> s / s >> x
  Ashr,
  Shl,
  Concat,   // x . s / s . x
  Extract,  // x[u:l] R t
};

enum class IcSide : uint8_t { Left, Right, Unary };

struct IcKey {
  IcOp op;
  IcSide side;
  Rel rel;
  friend bool operator==(const IcKey&, const IcKey&) = default;
  friend auto operator<=>(const IcKey&, const IcKey&) = default;
};

std::string to_string(IcKey key);
// Parses "<op>:<side>:<rel>", e.g. "bvudiv:r:ne". Throws UnsupportedError.
IcKey parse_ic_key(const std::string& text);

// Whether a row's condition changes at width 1, and why.
enum class Width1Kind {
  None,
  CaseSplit,         // the case split is part of the published condition
  DerivedOverride,   // pinned down by the exhaustive verifier
};

// The invertibility-condition tables: for a literal l[x] linear in x of a
// supported shape, a quantifier-free condition phi_c with x not free in
// phi_c and (exists x. l[x]) <=> phi_c valid, plus the unconditional
// inverses for {bvneg, bvnot, bvadd, bvmul-by-odd-constant} over equality.
class IcCatalog {
 public:
  explicit IcCatalog(TermStore& store) : store_(store) {}

  // Condition for a one-level literal: x R t, (x <> s) R t, (s <> x) R t,
  // ~x / -x R t, or x[u:l] R t, with x occurring exactly once and directly.
  // Throws UnsupportedError on a shape outside the catalog.
  Term get_ic(VarId x, Term lit) const;

  // t' with l[x] <=> x = t', for -x = t, ~x = t, x + s = t and x * c = t
  // with c an odd constant. Absent when no unconditional inverse exists.
  std::optional<Term> get_inverse(VarId x, Term lit) const;

  Term base_case_ic(Rel rel, Term t) const;

  // Every implemented row.
  std::vector<IcKey> entries() const;

  Width1Kind width1_kind(IcKey key) const;

  // Builds the row's condition from operand terms. s is ignored for unary
  // and base rows. x_width is the width of the solved variable (needed for
  // concat and the shift-amount bounds).
  Term condition(IcKey key, Term s, Term t, uint32_t x_width) const;

 private:
  TermStore& store_;
};

}  // namespace qbv
