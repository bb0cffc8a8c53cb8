#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbv/catalog.hpp"
#include "qbv/term.hpp"

namespace qbv {

struct VerificationReport {
  IcKey entry{};
  uint32_t width = 0;
  enum class Status { Verified, Refuted, Skipped } status = Status::Verified;
  // Populated on refutation: the first (s, t) pair where the condition and
  // exists-x truth values disagree. ce_s is absent for unary/base rows.
  std::optional<BitVec> ce_s;
  std::optional<BitVec> ce_t;
  bool condition_value = false;  // condition at the counterexample
  uint64_t pairs = 0;
  double seconds = 0.0;
  std::string skip_reason;
};

// Operand widths used when checking a row at sweep width w. Concat rows
// give x and s both width w (so t has width 2w); extract rows take the
// upper half-open slice [w-1 : w/2].
struct RowWidths {
  uint32_t xw = 0;
  uint32_t sw = 0;  // 0 when the row has no s operand
  uint32_t tw = 0;
  uint32_t hi = 0, lo = 0;  // extract rows
  bool has_s() const { return sw != 0; }
};
RowWidths row_widths(IcKey key, uint32_t w);

// The literal l[x] of a catalog row over the given operand terms.
Term row_literal(TermStore& store, IcKey key, Term x, Term s, Term t);

// Exhaustively compares cond against (exists x. lit) over every value of
// (s, t); x must not occur in cond. Used both by verify_ic and by the
// mutation tests, which pass deliberately broken conditions.
VerificationReport sweep_equivalence(IcKey entry, uint32_t width, VarId x,
                                     std::optional<VarId> s, VarId t,
                                     Term lit, Term cond,
                                     const TermStore& store);

// Checks one catalog row at one width. Widths above the cap are skipped.
VerificationReport verify_ic(TermStore& store, const IcCatalog& catalog,
                             IcKey entry, uint32_t width, uint32_t cap = 8);

struct VerifySummary {
  std::vector<VerificationReport> reports;
  // width -> (verified, refuted, skipped)
  std::map<uint32_t, std::array<uint64_t, 3>> per_width;
  uint64_t verified = 0, refuted = 0, skipped = 0;
  double seconds = 0.0;
};

VerifySummary verify_all(TermStore& store, const IcCatalog& catalog,
                         uint32_t width_min, uint32_t width_max,
                         unsigned jobs = 1,
                         const std::vector<IcKey>* only = nullptr);

std::string summary_table(const VerifySummary& summary);
// One record per line: entry width status [s t].
std::string summary_records(const VerifySummary& summary);

// SMT-LIB 2 script asserting the negated equivalence of a row's condition
// and its exists-x literal; the expected check-sat answer is unsat.
std::string emit_verification_smt2(TermStore& store, const IcCatalog& catalog,
                                   IcKey entry, uint32_t width);

enum class SygusGrammar { Restricted, General };

struct SygusShape {
  IcOp op;
  IcSide side;
};
// The 14 shapes of the synthesis grid (the x R t base case plus every
// operator/side combination of the binary table rows).
std::vector<SygusShape> sygus_shapes();

std::string emit_sygus(TermStore& store, SygusShape shape, Rel rel,
                       SygusGrammar grammar, uint32_t width = 4);

}  // namespace qbv
