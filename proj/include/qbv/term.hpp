#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qbv/bitvec.hpp"
#include "qbv/ops.hpp"

namespace qbv {

// Bool or BV(width). Bool is encoded as width 0.
struct Sort {
  uint32_t w = 0;

  static Sort boolean() { return Sort{0}; }
  static Sort bv(uint32_t width) { return Sort{width}; }

  bool is_bool() const { return w == 0; }
  bool is_bv() const { return w != 0; }
  uint32_t width() const {
    if (!is_bv()) throw SortError("width of Bool sort");
    return w;
  }
  friend bool operator==(const Sort&, const Sort&) = default;
};

struct VarId {
  uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

enum class Kind : uint8_t {
  BvConst,
  BoolConst,
  Var,
  BvOperator,
  Relation,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Ite,
  Choice,
  Forall,
  Exists,
};

struct Node;
// Terms are interned: structurally equal constructions yield the same
// pointer. Nodes live as long as their TermStore.
using Term = const Node*;

struct Node {
  Kind kind;
  Sort sort;
  BvOp op{};                  // kind == BvOperator
  Rel rel{};                  // kind == Relation
  uint32_t hi = 0, lo = 0;    // op == Extract
  BitVec bits;                // kind == BvConst
  bool bval = false;          // kind == BoolConst
  VarId var;                  // kind == Var, or the Choice bound variable
  std::vector<VarId> binders; // kind == Forall / Exists
  std::vector<Sort> binder_sorts;  // parallel to binders
  std::vector<Term> kids;
  uint32_t id = 0;            // creation index, used for deterministic order
};

class TermStore {
 public:
  TermStore() = default;
  TermStore(const TermStore&) = delete;
  TermStore& operator=(const TermStore&) = delete;

  VarId mk_var(const std::string& name, Sort sort);
  // Names a variable "<prefix>!<n>" with a store-wide counter.
  VarId fresh_var(const std::string& prefix, Sort sort);
  // Shared canonical binder for alpha_normalize, one per (width, depth).
  VarId canonical_binder(uint32_t width, uint32_t depth);
  std::string var_name(VarId v) const;
  Sort var_sort(VarId v) const;
  size_t var_count() const;

  Term var(VarId v);
  Term bv_const(BitVec value);
  Term bool_const(bool b);
  Term tru() { return bool_const(true); }
  Term fls() { return bool_const(false); }

  Term bvop(BvOp op, Term a);           // Not, Neg
  Term bvop(BvOp op, Term a, Term b);   // all binary operators
  Term extract(Term a, uint32_t hi, uint32_t lo);
  Term rel(Rel r, Term a, Term b);

  Term mk_not(Term a);
  Term mk_and(std::vector<Term> kids);
  Term mk_or(std::vector<Term> kids);
  Term mk_and(Term a, Term b) { return mk_and(std::vector<Term>{a, b}); }
  Term mk_or(Term a, Term b) { return mk_or(std::vector<Term>{a, b}); }
  Term implies(Term a, Term b);
  Term iff(Term a, Term b);
  Term ite(Term c, Term a, Term b);

  Term choice(VarId bound, Term body);
  Term forall(std::vector<VarId> vars, Term body);
  Term exists(std::vector<VarId> vars, Term body);

  // Shorthands.
  Term add(Term a, Term b) { return bvop(BvOp::Add, a, b); }
  Term mul(Term a, Term b) { return bvop(BvOp::Mul, a, b); }
  Term neg(Term a) { return bvop(BvOp::Neg, a); }
  Term bnot(Term a) { return bvop(BvOp::Not, a); }
  Term sub(Term a, Term b) { return add(a, neg(b)); }
  Term eq(Term a, Term b) { return rel(Rel::Eq, a, b); }
  Term ne(Term a, Term b) { return rel(Rel::Ne, a, b); }
  Term num(uint64_t value, uint32_t width) {
    return bv_const(BitVec(width, value));
  }
  Term zero(uint32_t w) { return num(0, w); }
  Term one(uint32_t w) { return num(1, w); }
  Term all_ones(uint32_t w) { return bv_const(BitVec::ones(w)); }
  Term min_signed_const(uint32_t w) { return bv_const(BitVec::min_signed(w)); }
  Term max_signed_const(uint32_t w) { return bv_const(BitVec::max_signed(w)); }

  size_t node_count() const;

 private:
  Term intern(Node n);

  mutable std::mutex mu_;
  std::deque<Node> arena_;
  std::unordered_map<std::string, Term> table_;

  struct VarInfo {
    std::string name;
    Sort sort;
  };
  std::vector<VarInfo> vars_;
  std::unordered_map<uint64_t, VarId> canonical_binders_;
  uint64_t fresh_counter_ = 0;
};

using Value = std::variant<BitVec, bool>;

bool value_eq(const Value& a, const Value& b);

// Total assignment used for evaluation; evaluation extends it internally
// for bound variables.
class Interpretation {
 public:
  void set(VarId v, Value val) { map_[v.id] = val; }
  void set(VarId v, BitVec bv) { map_[v.id] = Value{bv}; }
  void set(VarId v, bool b) { map_[v.id] = Value{b}; }
  void erase(VarId v) { map_.erase(v.id); }
  bool contains(VarId v) const { return map_.count(v.id) != 0; }
  const Value& get(VarId v) const;
  BitVec get_bv(VarId v) const;
  size_t size() const { return map_.size(); }
  // Ordered by variable id, for deterministic iteration.
  std::vector<std::pair<VarId, Value>> entries() const;

 private:
  std::unordered_map<uint32_t, Value> map_;
};

struct EvalOptions {
  // Quantifier and choice bodies are evaluated by exhaustive range
  // iteration; wider bound variables raise ResourceError.
  uint32_t quant_width_cap = 8;
};

// Standard semantics. Forall/Exists iterate the full range of each bound
// variable; Choice searches upward from 0 and defaults to 0 when the body
// is unsatisfiable.
Value evaluate(Term t, const Interpretation& interp, EvalOptions opts = {});
bool evaluate_bool(Term t, const Interpretation& interp, EvalOptions opts = {});
BitVec evaluate_bv(Term t, const Interpretation& interp, EvalOptions opts = {});

// Free variables, in id order.
std::set<VarId> free_vars(Term t);
bool occurs_free(VarId v, Term t);
// Number of free occurrences of v, counted per path through the DAG.
uint64_t occurrences(VarId v, Term t);

struct Literal {
  bool positive = true;
  Term atom = nullptr;  // kind == Relation
  friend bool operator==(const Literal&, const Literal&) = default;
};

bool is_linear_in(Term literal, VarId v);

// Atomic relation occurrences of a quantifier-free formula, each reported
// once per (atom, polarity), in first-occurrence order. Atoms below an ite
// condition or an iff are reported with positive polarity.
std::vector<Literal> literals(Term phi);

// The relation term a literal stands for: the atom itself, or its
// complement when the polarity is negative.
Term literal_term(TermStore& store, const Literal& lit);

// Simultaneous substitution on free occurrences. Replacements must
// sort-match; the caller guarantees absence of variable capture.
Term substitute(TermStore& store, Term t,
                const std::unordered_map<uint32_t, Term>& sigma);
Term substitute(TermStore& store, Term t, VarId v, Term replacement);

bool is_quantifier_free(Term t);
bool contains_choice(Term t);
// Node count of the tree unfolding, used as a structural size measure.
uint64_t term_size(Term t);

// Renames choice binders to canonical per-(width, nesting-depth)
// variables, so alpha-equivalent terms become the same node. Used to
// detect duplicate instantiations whose choice expressions differ only in
// the fresh bound variable.
Term alpha_normalize(TermStore& store, Term t);

}  // namespace qbv
