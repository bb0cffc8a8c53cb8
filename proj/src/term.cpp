#include "qbv/term.hpp"

#include <algorithm>
#include <cstring>

namespace qbv {

namespace {

void append_u32(std::string& s, uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  s.append(buf, 4);
}

void append_u64(std::string& s, uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  s.append(buf, 8);
}

std::string node_key(const Node& n) {
  std::string key;
  key.reserve(16 + 4 * n.kids.size());
  key.push_back(static_cast<char>(n.kind));
  append_u32(key, n.sort.w);
  switch (n.kind) {
    case Kind::BvConst:
      append_u32(key, n.bits.width());
      append_u64(key, n.bits.value());
      break;
    case Kind::BoolConst:
      key.push_back(n.bval ? 1 : 0);
      break;
    case Kind::Var:
      append_u32(key, n.var.id);
      break;
    case Kind::BvOperator:
      key.push_back(static_cast<char>(n.op));
      append_u32(key, n.hi);
      append_u32(key, n.lo);
      break;
    case Kind::Relation:
      key.push_back(static_cast<char>(n.rel));
      break;
    case Kind::Choice:
      append_u32(key, n.var.id);
      break;
    case Kind::Forall:
    case Kind::Exists:
      for (VarId b : n.binders) append_u32(key, b.id);
      break;
    default:
      break;
  }
  for (Term k : n.kids) append_u32(key, k->id);
  return key;
}

}  // namespace

VarId TermStore::mk_var(const std::string& name, Sort sort) {
  std::lock_guard<std::mutex> lock(mu_);
  vars_.push_back(VarInfo{name, sort});
  return VarId{static_cast<uint32_t>(vars_.size() - 1)};
}

VarId TermStore::fresh_var(const std::string& prefix, Sort sort) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string name = prefix + "!" + std::to_string(fresh_counter_++);
  vars_.push_back(VarInfo{name, sort});
  return VarId{static_cast<uint32_t>(vars_.size() - 1)};
}

VarId TermStore::canonical_binder(uint32_t width, uint32_t depth) {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t key = (uint64_t{width} << 32) | depth;
  auto it = canonical_binders_.find(key);
  if (it != canonical_binders_.end()) return it->second;
  vars_.push_back(VarInfo{
      "eps!" + std::to_string(width) + "!" + std::to_string(depth),
      Sort::bv(width)});
  VarId v{static_cast<uint32_t>(vars_.size() - 1)};
  canonical_binders_.emplace(key, v);
  return v;
}

std::string TermStore::var_name(VarId v) const {
  std::lock_guard<std::mutex> lock(mu_);
  return vars_.at(v.id).name;
}

Sort TermStore::var_sort(VarId v) const {
  std::lock_guard<std::mutex> lock(mu_);
  return vars_.at(v.id).sort;
}

size_t TermStore::var_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return vars_.size();
}

size_t TermStore::node_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return arena_.size();
}

Term TermStore::intern(Node n) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string key = node_key(n);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  n.id = static_cast<uint32_t>(arena_.size());
  arena_.push_back(std::move(n));
  Term t = &arena_.back();
  table_.emplace(std::move(key), t);
  return t;
}

Term TermStore::var(VarId v) {
  Node n;
  n.kind = Kind::Var;
  n.sort = var_sort(v);
  n.var = v;
  return intern(std::move(n));
}

Term TermStore::bv_const(BitVec value) {
  Node n;
  n.kind = Kind::BvConst;
  n.sort = Sort::bv(value.width());
  n.bits = value;
  return intern(std::move(n));
}

Term TermStore::bool_const(bool b) {
  Node n;
  n.kind = Kind::BoolConst;
  n.sort = Sort::boolean();
  n.bval = b;
  return intern(std::move(n));
}

Term TermStore::bvop(BvOp op, Term a) {
  if (op != BvOp::Not && op != BvOp::Neg)
    throw SortError("unary constructor used with non-unary operator");
  if (!a->sort.is_bv()) throw SortError("bit-vector operator applied to Bool");
  if (a->kind == Kind::BvConst) return bv_const(eval_unop(op, a->bits));
  Node n;
  n.kind = Kind::BvOperator;
  n.sort = a->sort;
  n.op = op;
  n.kids = {a};
  return intern(std::move(n));
}

Term TermStore::bvop(BvOp op, Term a, Term b) {
  if (is_unary(op)) throw SortError("binary constructor used with unary operator");
  if (!a->sort.is_bv() || !b->sort.is_bv())
    throw SortError("bit-vector operator applied to Bool");
  Sort result;
  if (op == BvOp::Concat) {
    uint32_t w = a->sort.width() + b->sort.width();
    if (w > kMaxWidth)
      throw SortError("concat: result width " + std::to_string(w) +
                      " exceeds " + std::to_string(kMaxWidth));
    result = Sort::bv(w);
  } else {
    if (a->sort != b->sort)
      throw SortError(std::string(smtlib_name(op)) + ": operand widths " +
                      std::to_string(a->sort.width()) + " and " +
                      std::to_string(b->sort.width()) + " differ");
    result = a->sort;
  }
  if (a->kind == Kind::BvConst && b->kind == Kind::BvConst)
    return bv_const(eval_binop(op, a->bits, b->bits));
  Node n;
  n.kind = Kind::BvOperator;
  n.sort = result;
  n.op = op;
  n.kids = {a, b};
  return intern(std::move(n));
}

Term TermStore::extract(Term a, uint32_t hi, uint32_t lo) {
  if (!a->sort.is_bv()) throw SortError("extract applied to Bool");
  if (lo > hi || hi >= a->sort.width())
    throw SortError("extract: indices [" + std::to_string(hi) + ":" +
                    std::to_string(lo) + "] out of range for width " +
                    std::to_string(a->sort.width()));
  if (a->kind == Kind::BvConst) return bv_const(bv_extract(a->bits, hi, lo));
  Node n;
  n.kind = Kind::BvOperator;
  n.sort = Sort::bv(hi - lo + 1);
  n.op = BvOp::Extract;
  n.hi = hi;
  n.lo = lo;
  n.kids = {a};
  return intern(std::move(n));
}

Term TermStore::rel(Rel r, Term a, Term b) {
  if (!a->sort.is_bv() || !b->sort.is_bv())
    throw SortError("relation applied to Bool term");
  if (a->sort != b->sort)
    throw SortError(std::string(smtlib_name(r)) + ": operand widths " +
                    std::to_string(a->sort.width()) + " and " +
                    std::to_string(b->sort.width()) + " differ");
  if (a->kind == Kind::BvConst && b->kind == Kind::BvConst)
    return bool_const(eval_cmp(r, a->bits, b->bits));
  Node n;
  n.kind = Kind::Relation;
  n.sort = Sort::boolean();
  n.rel = r;
  n.kids = {a, b};
  return intern(std::move(n));
}

namespace {
void require_bool(Term t, const char* what) {
  if (!t->sort.is_bool())
    throw SortError(std::string(what) + " expects Boolean operands");
}
}  // namespace

Term TermStore::mk_not(Term a) {
  require_bool(a, "not");
  if (a->kind == Kind::BoolConst) return bool_const(!a->bval);
  Node n;
  n.kind = Kind::Not;
  n.sort = Sort::boolean();
  n.kids = {a};
  return intern(std::move(n));
}

Term TermStore::mk_and(std::vector<Term> kids) {
  if (kids.empty()) return tru();
  for (Term k : kids) require_bool(k, "and");
  if (kids.size() == 1) return kids[0];
  if (std::all_of(kids.begin(), kids.end(),
                  [](Term k) { return k->kind == Kind::BoolConst; }))
    return bool_const(std::all_of(kids.begin(), kids.end(),
                                  [](Term k) { return k->bval; }));
  Node n;
  n.kind = Kind::And;
  n.sort = Sort::boolean();
  n.kids = std::move(kids);
  return intern(std::move(n));
}

Term TermStore::mk_or(std::vector<Term> kids) {
  if (kids.empty()) return fls();
  for (Term k : kids) require_bool(k, "or");
  if (kids.size() == 1) return kids[0];
  if (std::all_of(kids.begin(), kids.end(),
                  [](Term k) { return k->kind == Kind::BoolConst; }))
    return bool_const(std::any_of(kids.begin(), kids.end(),
                                  [](Term k) { return k->bval; }));
  Node n;
  n.kind = Kind::Or;
  n.sort = Sort::boolean();
  n.kids = std::move(kids);
  return intern(std::move(n));
}

Term TermStore::implies(Term a, Term b) {
  require_bool(a, "=>");
  require_bool(b, "=>");
  if (a->kind == Kind::BoolConst && b->kind == Kind::BoolConst)
    return bool_const(!a->bval || b->bval);
  Node n;
  n.kind = Kind::Implies;
  n.sort = Sort::boolean();
  n.kids = {a, b};
  return intern(std::move(n));
}

Term TermStore::iff(Term a, Term b) {
  require_bool(a, "iff");
  require_bool(b, "iff");
  if (a->kind == Kind::BoolConst && b->kind == Kind::BoolConst)
    return bool_const(a->bval == b->bval);
  Node n;
  n.kind = Kind::Iff;
  n.sort = Sort::boolean();
  n.kids = {a, b};
  return intern(std::move(n));
}

Term TermStore::ite(Term c, Term a, Term b) {
  require_bool(c, "ite");
  if (a->sort != b->sort) throw SortError("ite: branch sorts differ");
  if (c->kind == Kind::BoolConst &&
      (a->kind == Kind::BvConst || a->kind == Kind::BoolConst) &&
      (b->kind == Kind::BvConst || b->kind == Kind::BoolConst))
    return c->bval ? a : b;
  Node n;
  n.kind = Kind::Ite;
  n.sort = a->sort;
  n.kids = {c, a, b};
  return intern(std::move(n));
}

Term TermStore::choice(VarId bound, Term body) {
  Sort s = var_sort(bound);
  if (!s.is_bv()) throw SortError("choice binder must be bit-vector sorted");
  require_bool(body, "choice");
  Node n;
  n.kind = Kind::Choice;
  n.sort = s;
  n.var = bound;
  n.kids = {body};
  return intern(std::move(n));
}

Term TermStore::forall(std::vector<VarId> vars, Term body) {
  if (vars.empty()) return body;
  std::vector<Sort> sorts;
  sorts.reserve(vars.size());
  for (VarId v : vars) {
    Sort s = var_sort(v);
    if (!s.is_bv())
      throw SortError("quantified variables must be bit-vector sorted");
    sorts.push_back(s);
  }
  require_bool(body, "forall");
  Node n;
  n.kind = Kind::Forall;
  n.sort = Sort::boolean();
  n.binders = std::move(vars);
  n.binder_sorts = std::move(sorts);
  n.kids = {body};
  return intern(std::move(n));
}

Term TermStore::exists(std::vector<VarId> vars, Term body) {
  if (vars.empty()) return body;
  std::vector<Sort> sorts;
  sorts.reserve(vars.size());
  for (VarId v : vars) {
    Sort s = var_sort(v);
    if (!s.is_bv())
      throw SortError("quantified variables must be bit-vector sorted");
    sorts.push_back(s);
  }
  require_bool(body, "exists");
  Node n;
  n.kind = Kind::Exists;
  n.sort = Sort::boolean();
  n.binders = std::move(vars);
  n.binder_sorts = std::move(sorts);
  n.kids = {body};
  return intern(std::move(n));
}

bool value_eq(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<bool>(a))
    return std::get<bool>(a) == std::get<bool>(b);
  return std::get<BitVec>(a) == std::get<BitVec>(b);
}

const Value& Interpretation::get(VarId v) const {
  auto it = map_.find(v.id);
  if (it == map_.end())
    throw SortError("interpretation has no assignment for variable id " +
                    std::to_string(v.id));
  return it->second;
}

BitVec Interpretation::get_bv(VarId v) const {
  const Value& val = get(v);
  if (!std::holds_alternative<BitVec>(val))
    throw SortError("expected bit-vector value");
  return std::get<BitVec>(val);
}

std::vector<std::pair<VarId, Value>> Interpretation::entries() const {
  std::vector<std::pair<VarId, Value>> out;
  out.reserve(map_.size());
  for (const auto& [id, val] : map_) out.emplace_back(VarId{id}, val);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

struct EvalCtx {
  const Interpretation& base;
  std::unordered_map<uint32_t, Value> overlay;
  EvalOptions opts;

  const Value& lookup(VarId v) const {
    auto it = overlay.find(v.id);
    if (it != overlay.end()) return it->second;
    return base.get(v);
  }
};

Value eval_node(Term t, EvalCtx& ctx);

bool eval_node_bool(Term t, EvalCtx& ctx) {
  Value v = eval_node(t, ctx);
  if (!std::holds_alternative<bool>(v))
    throw SortError("expected Boolean value");
  return std::get<bool>(v);
}

BitVec eval_node_bv(Term t, EvalCtx& ctx) {
  Value v = eval_node(t, ctx);
  if (!std::holds_alternative<BitVec>(v))
    throw SortError("expected bit-vector value");
  return std::get<BitVec>(v);
}

void check_quant_width(uint32_t width, const EvalCtx& ctx) {
  if (width > ctx.opts.quant_width_cap)
    throw ResourceError("exhaustive evaluation of a bound variable of width " +
                        std::to_string(width) + " exceeds the cap of " +
                        std::to_string(ctx.opts.quant_width_cap));
}

bool eval_quant(Term t, size_t i, bool is_forall, EvalCtx& ctx) {
  if (i == t->binders.size()) return eval_node_bool(t->kids[0], ctx);
  uint32_t w = t->binder_sorts[i].width();
  check_quant_width(w, ctx);
  uint64_t count = uint64_t{1} << w;
  uint32_t vid = t->binders[i].id;
  bool result = is_forall;
  for (uint64_t v = 0; v < count; ++v) {
    ctx.overlay[vid] = Value{BitVec(w, v)};
    bool r = eval_quant(t, i + 1, is_forall, ctx);
    if (r != is_forall) {
      result = r;
      break;
    }
  }
  ctx.overlay.erase(vid);
  return result;
}

Value eval_node(Term t, EvalCtx& ctx) {
  switch (t->kind) {
    case Kind::BvConst:
      return Value{t->bits};
    case Kind::BoolConst:
      return Value{t->bval};
    case Kind::Var:
      return ctx.lookup(t->var);
    case Kind::BvOperator: {
      if (t->op == BvOp::Extract)
        return Value{bv_extract(eval_node_bv(t->kids[0], ctx), t->hi, t->lo)};
      if (t->kids.size() == 1)
        return Value{eval_unop(t->op, eval_node_bv(t->kids[0], ctx))};
      return Value{eval_binop(t->op, eval_node_bv(t->kids[0], ctx),
                              eval_node_bv(t->kids[1], ctx))};
    }
    case Kind::Relation:
      return Value{eval_cmp(t->rel, eval_node_bv(t->kids[0], ctx),
                            eval_node_bv(t->kids[1], ctx))};
    case Kind::Not:
      return Value{!eval_node_bool(t->kids[0], ctx)};
    case Kind::And: {
      for (Term k : t->kids)
        if (!eval_node_bool(k, ctx)) return Value{false};
      return Value{true};
    }
    case Kind::Or: {
      for (Term k : t->kids)
        if (eval_node_bool(k, ctx)) return Value{true};
      return Value{false};
    }
    case Kind::Implies:
      return Value{!eval_node_bool(t->kids[0], ctx) ||
                   eval_node_bool(t->kids[1], ctx)};
    case Kind::Iff:
      return Value{eval_node_bool(t->kids[0], ctx) ==
                   eval_node_bool(t->kids[1], ctx)};
    case Kind::Ite:
      return eval_node(t->kids[eval_node_bool(t->kids[0], ctx) ? 1 : 2], ctx);
    case Kind::Choice: {
      uint32_t w = t->sort.width();
      check_quant_width(w, ctx);
      uint64_t count = uint64_t{1} << w;
      uint64_t witness = 0;  // documented default for unsatisfiable bodies
      for (uint64_t v = 0; v < count; ++v) {
        ctx.overlay[t->var.id] = Value{BitVec(w, v)};
        if (eval_node_bool(t->kids[0], ctx)) {
          witness = v;
          break;
        }
      }
      ctx.overlay.erase(t->var.id);
      return Value{BitVec(w, witness)};
    }
    case Kind::Forall:
      return Value{eval_quant(t, 0, true, ctx)};
    case Kind::Exists:
      return Value{eval_quant(t, 0, false, ctx)};
  }
  throw SortError("malformed term");
}

}  // namespace

Value evaluate(Term t, const Interpretation& interp, EvalOptions opts) {
  EvalCtx ctx{interp, {}, opts};
  return eval_node(t, ctx);
}

bool evaluate_bool(Term t, const Interpretation& interp, EvalOptions opts) {
  Value v = evaluate(t, interp, opts);
  if (!std::holds_alternative<bool>(v))
    throw SortError("expected Boolean value");
  return std::get<bool>(v);
}

BitVec evaluate_bv(Term t, const Interpretation& interp, EvalOptions opts) {
  Value v = evaluate(t, interp, opts);
  if (!std::holds_alternative<BitVec>(v))
    throw SortError("expected bit-vector value");
  return std::get<BitVec>(v);
}

namespace {

void free_vars_rec(Term t, std::set<VarId>& bound, std::set<VarId>& out) {
  switch (t->kind) {
    case Kind::Var:
      if (!bound.count(t->var)) out.insert(t->var);
      return;
    case Kind::Choice: {
      bool was_bound = bound.count(t->var) != 0;
      bound.insert(t->var);
      free_vars_rec(t->kids[0], bound, out);
      if (!was_bound) bound.erase(t->var);
      return;
    }
    case Kind::Forall:
    case Kind::Exists: {
      std::vector<VarId> added;
      for (VarId b : t->binders)
        if (bound.insert(b).second) added.push_back(b);
      free_vars_rec(t->kids[0], bound, out);
      for (VarId b : added) bound.erase(b);
      return;
    }
    default:
      for (Term k : t->kids) free_vars_rec(k, bound, out);
      return;
  }
}

}  // namespace

std::set<VarId> free_vars(Term t) {
  std::set<VarId> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

bool occurs_free(VarId v, Term t) { return occurrences(v, t) > 0; }

namespace {

uint64_t occ_rec(VarId v, Term t, int depth_bound_shadow) {
  switch (t->kind) {
    case Kind::Var:
      return (t->var == v && depth_bound_shadow == 0) ? 1 : 0;
    case Kind::Choice:
      return occ_rec(v, t->kids[0],
                     depth_bound_shadow + (t->var == v ? 1 : 0));
    case Kind::Forall:
    case Kind::Exists: {
      int shadow = depth_bound_shadow;
      for (VarId b : t->binders)
        if (b == v) shadow++;
      return occ_rec(v, t->kids[0], shadow);
    }
    default: {
      uint64_t n = 0;
      for (Term k : t->kids) n += occ_rec(v, k, depth_bound_shadow);
      return n;
    }
  }
}

}  // namespace

uint64_t occurrences(VarId v, Term t) { return occ_rec(v, t, 0); }

bool is_linear_in(Term literal, VarId v) { return occurrences(v, literal) == 1; }

namespace {

void literals_rec(Term t, bool positive, bool forced_positive,
                  std::vector<Literal>& out,
                  std::set<std::pair<Term, bool>>& seen) {
  switch (t->kind) {
    case Kind::Relation: {
      bool pol = forced_positive ? true : positive;
      if (seen.insert({t, pol}).second) out.push_back(Literal{pol, t});
      // Relation operands are bit-vector terms; atoms can still occur
      // below an ite condition inside them.
      for (Term k : t->kids) literals_rec(k, true, true, out, seen);
      return;
    }
    case Kind::Not:
      literals_rec(t->kids[0], !positive, forced_positive, out, seen);
      return;
    case Kind::Implies:
      literals_rec(t->kids[0], !positive, forced_positive, out, seen);
      literals_rec(t->kids[1], positive, forced_positive, out, seen);
      return;
    case Kind::Iff:
      literals_rec(t->kids[0], true, true, out, seen);
      literals_rec(t->kids[1], true, true, out, seen);
      return;
    case Kind::Ite:
      literals_rec(t->kids[0], true, true, out, seen);
      literals_rec(t->kids[1], positive, forced_positive, out, seen);
      literals_rec(t->kids[2], positive, forced_positive, out, seen);
      return;
    case Kind::Forall:
    case Kind::Exists:
    case Kind::Choice:
      throw PreconditionError("literals: formula is not quantifier-free");
    default:
      for (Term k : t->kids)
        literals_rec(k, positive, forced_positive, out, seen);
      return;
  }
}

}  // namespace

std::vector<Literal> literals(Term phi) {
  std::vector<Literal> out;
  std::set<std::pair<Term, bool>> seen;
  literals_rec(phi, true, false, out, seen);
  return out;
}

Term literal_term(TermStore& store, const Literal& lit) {
  if (lit.atom->kind != Kind::Relation)
    throw PreconditionError("literal atom must be a relation");
  if (lit.positive) return lit.atom;
  return store.rel(complement(lit.atom->rel), lit.atom->kids[0],
                   lit.atom->kids[1]);
}

namespace {

Term subst_rec(TermStore& store, Term t,
               const std::unordered_map<uint32_t, Term>& sigma) {
  if (sigma.empty()) return t;
  switch (t->kind) {
    case Kind::BvConst:
    case Kind::BoolConst:
      return t;
    case Kind::Var: {
      auto it = sigma.find(t->var.id);
      if (it == sigma.end()) return t;
      if (it->second->sort != t->sort)
        throw SortError("substitute: replacement sort mismatch for " +
                        store.var_name(t->var));
      return it->second;
    }
    case Kind::Choice: {
      if (sigma.count(t->var.id)) {
        auto reduced = sigma;
        reduced.erase(t->var.id);
        Term body = subst_rec(store, t->kids[0], reduced);
        return body == t->kids[0] ? t : store.choice(t->var, body);
      }
      Term body = subst_rec(store, t->kids[0], sigma);
      return body == t->kids[0] ? t : store.choice(t->var, body);
    }
    case Kind::Forall:
    case Kind::Exists: {
      auto reduced = sigma;
      for (VarId b : t->binders) reduced.erase(b.id);
      Term body = subst_rec(store, t->kids[0], reduced);
      if (body == t->kids[0]) return t;
      return t->kind == Kind::Forall ? store.forall(t->binders, body)
                                     : store.exists(t->binders, body);
    }
    default: {
      std::vector<Term> kids;
      kids.reserve(t->kids.size());
      bool changed = false;
      for (Term k : t->kids) {
        Term k2 = subst_rec(store, k, sigma);
        changed |= (k2 != k);
        kids.push_back(k2);
      }
      if (!changed) return t;
      switch (t->kind) {
        case Kind::BvOperator:
          if (t->op == BvOp::Extract)
            return store.extract(kids[0], t->hi, t->lo);
          if (kids.size() == 1) return store.bvop(t->op, kids[0]);
          return store.bvop(t->op, kids[0], kids[1]);
        case Kind::Relation:
          return store.rel(t->rel, kids[0], kids[1]);
        case Kind::Not:
          return store.mk_not(kids[0]);
        case Kind::And:
          return store.mk_and(std::move(kids));
        case Kind::Or:
          return store.mk_or(std::move(kids));
        case Kind::Implies:
          return store.implies(kids[0], kids[1]);
        case Kind::Iff:
          return store.iff(kids[0], kids[1]);
        case Kind::Ite:
          return store.ite(kids[0], kids[1], kids[2]);
        default:
          throw SortError("malformed term");
      }
    }
  }
}

}  // namespace

Term substitute(TermStore& store, Term t,
                const std::unordered_map<uint32_t, Term>& sigma) {
  return subst_rec(store, t, sigma);
}

Term substitute(TermStore& store, Term t, VarId v, Term replacement) {
  std::unordered_map<uint32_t, Term> sigma;
  sigma.emplace(v.id, replacement);
  return subst_rec(store, t, sigma);
}

bool is_quantifier_free(Term t) {
  if (t->kind == Kind::Forall || t->kind == Kind::Exists) return false;
  for (Term k : t->kids)
    if (!is_quantifier_free(k)) return false;
  return true;
}

bool contains_choice(Term t) {
  if (t->kind == Kind::Choice) return true;
  for (Term k : t->kids)
    if (contains_choice(k)) return true;
  return false;
}

namespace {

uint64_t size_rec(Term t, std::unordered_map<Term, uint64_t>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  uint64_t n = 1;
  for (Term k : t->kids) n += size_rec(k, memo);
  memo.emplace(t, n);
  return n;
}

}  // namespace

uint64_t term_size(Term t) {
  std::unordered_map<Term, uint64_t> memo;
  return size_rec(t, memo);
}

namespace {

Term alpha_rec(Term t, uint32_t depth, TermStore& store) {
  if (!contains_choice(t)) return t;
  if (t->kind == Kind::Choice) {
    Term body = alpha_rec(t->kids[0], depth + 1, store);
    VarId canon = store.canonical_binder(t->sort.width(), depth);
    if (canon != t->var)
      body = substitute(store, body, t->var, store.var(canon));
    return store.choice(canon, body);
  }
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (Term k : t->kids) kids.push_back(alpha_rec(k, depth, store));
  switch (t->kind) {
    case Kind::BvOperator:
      if (t->op == BvOp::Extract) return store.extract(kids[0], t->hi, t->lo);
      if (kids.size() == 1) return store.bvop(t->op, kids[0]);
      return store.bvop(t->op, kids[0], kids[1]);
    case Kind::Relation:
      return store.rel(t->rel, kids[0], kids[1]);
    case Kind::Not:
      return store.mk_not(kids[0]);
    case Kind::And:
      return store.mk_and(std::move(kids));
    case Kind::Or:
      return store.mk_or(std::move(kids));
    case Kind::Implies:
      return store.implies(kids[0], kids[1]);
    case Kind::Iff:
      return store.iff(kids[0], kids[1]);
    case Kind::Ite:
      return store.ite(kids[0], kids[1], kids[2]);
    case Kind::Forall:
      return store.forall(t->binders, kids[0]);
    case Kind::Exists:
      return store.exists(t->binders, kids[0]);
    default:
      return t;
  }
}

}  // namespace

Term alpha_normalize(TermStore& store, Term t) { return alpha_rec(t, 0, store); }

}  // namespace qbv
