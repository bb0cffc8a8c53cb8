#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbv/catalog.hpp"
#include "qbv/qfbv.hpp"
#include "qbv/solve.hpp"
#include "qbv/term.hpp"

namespace qbv {

// Selection-function configuration: model value, keep, slack, boundary.
enum class Config { ModelValue, Keep, Slack, Boundary };

char config_letter(Config c);
Config parse_config(const std::string& text);

// Prenex problem: exists outer . forall universals . matrix.
struct Problem {
  Term matrix = nullptr;
  std::vector<VarId> outer;
  std::vector<VarId> universals;
  // Set when preprocessing negated a closed forall-exists input; the
  // caller must flip sat/unsat (no model is available then).
  bool negated = false;
};

struct RoundLog {
  std::string model;
  std::vector<std::string> chosen_terms;
  bool model_fallback = false;
  bool duplicate_retry = false;
};

struct CegqiStats {
  uint64_t rounds = 0;
  uint64_t instantiations = 0;
  uint64_t model_fallbacks = 0;
  uint64_t duplicate_retries = 0;
  uint64_t choice_constants = 0;
};

struct CegqiVerdict {
  enum class Kind { Sat, Unsat, ResourceOut } kind = Kind::ResourceOut;
  Interpretation model;  // over the outer variables, Sat only
  CegqiStats stats;
  std::vector<RoundLog> log;
  std::string diagnostic;
};

struct CegqiOptions {
  Config config = Config::Boundary;
  uint64_t max_instantiations = 10000;
  Backend backend;
  CheckOptions check;
  bool collect_log = false;
};

// Literal projection. The literal must be an atomic relation satisfied by
// the interpretation; the model-value configuration drops it (nullopt).
std::optional<Term> project(TermStore& store, Config config,
                            const Interpretation& interp, Term lit);

// One literal per free occurrence of x, each keeping a single occurrence
// and replacing the others with x's model value. Applies the linearizing
// rewrites first.
std::vector<Term> linearize(TermStore& store, VarId x,
                            const Interpretation& interp, Term lit);

// The documented closed rewrite set: double complement/negation
// cancellation, bvneg/bvnot mixing into sums, idempotent bvand/bvor, sum
// flattening with constant-multiplier collection.
Term linearizing_rewrite(TermStore& store, Term t);

struct SelectOutcome {
  std::vector<Term> terms;
  uint64_t model_fallbacks = 0;
};

// Selection function: satisfied literals of psi under the interpretation,
// projected per configuration, solved per variable with back-substitution
// of previously solved forms.
SelectOutcome select_terms(TermStore& store, const IcCatalog& catalog,
                           Config config, const std::vector<VarId>& universals,
                           Term psi, const Interpretation& interp);

// Replaces every choice binder with a fresh constant and collects the
// defining facts; the result and definitions are choice-free.
Term eliminate_choices(TermStore& store, Term t, std::vector<Term>& defs,
                       uint64_t* counter = nullptr);

// The counterexample-guided instantiation loop.
CegqiVerdict cegqi_check(TermStore& store, const IcCatalog& catalog,
                         const Problem& problem, const CegqiOptions& opts);

// Normalization pipeline: negation normal form, prenexing with at most one
// alternation (closed forall-exists inputs are negated and flagged),
// destructive equality resolution, splitting of universals under extract
// into concatenations of fresh region variables, linearizing rewrites.
// Throws UnsupportedError on inputs outside the fragment.
Problem preprocess(TermStore& store, const std::vector<Term>& assertions,
                   const std::vector<VarId>& declared_consts);

}  // namespace qbv
