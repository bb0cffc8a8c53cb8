#include "qbv/cegqi.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "qbv/printer.hpp"

namespace qbv {

char config_letter(Config c) {
  switch (c) {
    case Config::ModelValue: return 'm';
    case Config::Keep: return 'k';
    case Config::Slack: return 's';
    case Config::Boundary: return 'b';
  }
  throw Error("bad configuration");
}

Config parse_config(const std::string& text) {
  if (text == "m") return Config::ModelValue;
  if (text == "k") return Config::Keep;
  if (text == "s") return Config::Slack;
  if (text == "b") return Config::Boundary;
  throw UnsupportedError("unknown configuration '" + text +
                         "', expected one of m k s b");
}

std::optional<Term> project(TermStore& store, Config config,
                            const Interpretation& interp, Term lit) {
  if (lit->kind != Kind::Relation)
    throw PreconditionError("project expects an atomic relation");
  switch (config) {
    case Config::ModelValue:
      return std::nullopt;
    case Config::Keep:
      return lit;
    case Config::Slack: {
      Term lhs = lit->kids[0];
      Term rhs = lit->kids[1];
      BitVec diff = bv_sub(evaluate_bv(lhs, interp), evaluate_bv(rhs, interp));
      return store.eq(lhs, store.add(rhs, store.bv_const(diff)));
    }
    case Config::Boundary: {
      Term lhs = lit->kids[0];
      Term rhs = lit->kids[1];
      BitVec lv = evaluate_bv(lhs, interp);
      BitVec rv = evaluate_bv(rhs, interp);
      if (lv == rv) return store.eq(lhs, rhs);
      Term one = store.one(rhs->sort.width());
      if (lv.value() > rv.value()) return store.eq(lhs, store.add(rhs, one));
      return store.eq(lhs, store.sub(rhs, one));
    }
  }
  throw Error("bad configuration");
}

namespace {

// Splits an addend into (coefficient, base); base == nullptr marks a
// constant contribution.
std::pair<BitVec, Term> addend_parts(Term t) {
  uint32_t w = t->sort.width();
  if (t->kind == Kind::BvConst) return {t->bits, nullptr};
  if (t->kind == Kind::BvOperator && t->op == BvOp::Neg)
    return {BitVec::ones(w), t->kids[0]};  // -e == (2^w - 1) * e mod 2^w
  if (t->kind == Kind::BvOperator && t->op == BvOp::Mul) {
    if (t->kids[0]->kind == Kind::BvConst) return {t->kids[0]->bits, t->kids[1]};
    if (t->kids[1]->kind == Kind::BvConst) return {t->kids[1]->bits, t->kids[0]};
  }
  return {BitVec::one(w), t};
}

void flatten_add(Term t, std::vector<Term>& out) {
  if (t->kind == Kind::BvOperator && t->op == BvOp::Add) {
    flatten_add(t->kids[0], out);
    flatten_add(t->kids[1], out);
    return;
  }
  out.push_back(t);
}

Term rewrite_node(TermStore& store, Term t) {
  if (t->kind != Kind::BvOperator) return t;
  switch (t->op) {
    case BvOp::And:
    case BvOp::Or:
      if (t->kids[0] == t->kids[1]) return t->kids[0];
      return t;
    case BvOp::Not: {
      Term a = t->kids[0];
      if (a->kind == Kind::BvOperator && a->op == BvOp::Not) return a->kids[0];
      if (a->kind == Kind::BvOperator && a->op == BvOp::Neg)
        return store.sub(a->kids[0], store.one(t->sort.width()));
      return t;
    }
    case BvOp::Neg: {
      Term a = t->kids[0];
      if (a->kind == Kind::BvOperator && a->op == BvOp::Neg) return a->kids[0];
      if (a->kind == Kind::BvOperator && a->op == BvOp::Not)
        return store.add(a->kids[0], store.one(t->sort.width()));
      return t;
    }
    case BvOp::Add: {
      std::vector<Term> addends;
      flatten_add(t, addends);
      if (addends.size() < 2) return t;
      uint32_t w = t->sort.width();
      BitVec const_sum = BitVec::zero(w);
      std::vector<Term> order;
      std::unordered_map<Term, BitVec> coeff;
      for (Term a : addends) {
        auto [c, base] = addend_parts(a);
        if (!base) {
          const_sum = bv_add(const_sum, c);
          continue;
        }
        auto it = coeff.find(base);
        if (it == coeff.end()) {
          coeff.emplace(base, c);
          order.push_back(base);
        } else {
          it->second = bv_add(it->second, c);
        }
      }
      std::vector<Term> parts;
      for (Term base : order) {
        BitVec c = coeff.at(base);
        if (c.is_zero()) continue;
        if (c.is_one())
          parts.push_back(base);
        else if (c.is_ones())
          parts.push_back(store.neg(base));
        else
          parts.push_back(store.mul(store.bv_const(c), base));
      }
      if (!const_sum.is_zero() || parts.empty())
        parts.push_back(store.bv_const(const_sum));
      Term acc = parts[0];
      for (size_t i = 1; i < parts.size(); ++i) acc = store.add(acc, parts[i]);
      return acc;
    }
    default:
      return t;
  }
}

Term rewrite_rec(TermStore& store, Term t,
                 std::unordered_map<Term, Term>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Term result = t;
  if (!t->kids.empty()) {
    std::vector<Term> kids;
    kids.reserve(t->kids.size());
    bool changed = false;
    for (Term k : t->kids) {
      Term k2 = rewrite_rec(store, k, memo);
      changed |= k2 != k;
      kids.push_back(k2);
    }
    if (changed) {
      switch (t->kind) {
        case Kind::BvOperator:
          if (t->op == BvOp::Extract)
            result = store.extract(kids[0], t->hi, t->lo);
          else if (kids.size() == 1)
            result = store.bvop(t->op, kids[0]);
          else
            result = store.bvop(t->op, kids[0], kids[1]);
          break;
        case Kind::Relation:
          result = store.rel(t->rel, kids[0], kids[1]);
          break;
        case Kind::Not:
          result = store.mk_not(kids[0]);
          break;
        case Kind::And:
          result = store.mk_and(std::move(kids));
          break;
        case Kind::Or:
          result = store.mk_or(std::move(kids));
          break;
        case Kind::Implies:
          result = store.implies(kids[0], kids[1]);
          break;
        case Kind::Iff:
          result = store.iff(kids[0], kids[1]);
          break;
        case Kind::Ite:
          result = store.ite(kids[0], kids[1], kids[2]);
          break;
        case Kind::Choice:
          result = store.choice(t->var, kids[0]);
          break;
        case Kind::Forall:
          result = store.forall(t->binders, kids[0]);
          break;
        case Kind::Exists:
          result = store.exists(t->binders, kids[0]);
          break;
        default:
          break;
      }
    }
  }
  result = rewrite_node(store, result);
  memo.emplace(t, result);
  return result;
}

}  // namespace

Term linearizing_rewrite(TermStore& store, Term t) {
  std::unordered_map<Term, Term> memo;
  return rewrite_rec(store, t, memo);
}

namespace {

// Rebuilds t keeping the keep_index-th free occurrence of x (preorder,
// left to right) and replacing every other one with the value term.
Term keep_one_occurrence(TermStore& store, Term t, VarId x, Term value,
                         uint64_t keep_index, uint64_t& counter) {
  switch (t->kind) {
    case Kind::Var:
      if (t->var == x) {
        Term r = counter == keep_index ? t : value;
        ++counter;
        return r;
      }
      return t;
    case Kind::BvConst:
    case Kind::BoolConst:
      return t;
    case Kind::Choice:
      if (t->var == x) return t;  // shadowed
      {
        Term body =
            keep_one_occurrence(store, t->kids[0], x, value, keep_index, counter);
        return body == t->kids[0] ? t : store.choice(t->var, body);
      }
    case Kind::Forall:
    case Kind::Exists: {
      for (VarId b : t->binders)
        if (b == x) return t;  // shadowed
      Term body =
          keep_one_occurrence(store, t->kids[0], x, value, keep_index, counter);
      if (body == t->kids[0]) return t;
      return t->kind == Kind::Forall ? store.forall(t->binders, body)
                                     : store.exists(t->binders, body);
    }
    default: {
      std::vector<Term> kids;
      kids.reserve(t->kids.size());
      bool changed = false;
      for (Term k : t->kids) {
        Term k2 = keep_one_occurrence(store, k, x, value, keep_index, counter);
        changed |= k2 != k;
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

std::vector<Term> linearize(TermStore& store, VarId x,
                            const Interpretation& interp, Term lit) {
  Term rewritten = linearizing_rewrite(store, lit);
  uint64_t occ = occurrences(x, rewritten);
  if (occ == 0) return {};
  if (occ == 1) return {rewritten};
  Term value = store.bv_const(interp.get_bv(x));
  std::vector<Term> out;
  out.reserve(occ);
  for (uint64_t k = 0; k < occ; ++k) {
    uint64_t counter = 0;
    out.push_back(keep_one_occurrence(store, rewritten, x, value, k, counter));
  }
  return out;
}

SelectOutcome select_terms(TermStore& store, const IcCatalog& catalog,
                           Config config, const std::vector<VarId>& universals,
                           Term psi, const Interpretation& interp) {
  SelectOutcome out;
  // M: the satisfied form of every literal of psi.
  std::vector<Term> satisfied;
  {
    std::unordered_set<Term> seen;
    for (const Literal& lit : literals(psi)) {
      Term atom = lit.atom;
      bool truth = evaluate_bool(atom, interp);
      Term m = truth ? atom
                     : store.rel(complement(atom->rel), atom->kids[0],
                                 atom->kids[1]);
      if (seen.insert(m).second) satisfied.push_back(m);
    }
  }
  // N: projections.
  std::vector<Term> projected;
  for (Term m : satisfied)
    if (auto p = project(store, config, interp, m)) projected.push_back(*p);

  std::vector<Term>& ts = out.terms;
  ts.resize(universals.size(), nullptr);
  for (size_t i = 0; i < universals.size(); ++i) {
    VarId xi = universals[i];
    // N_i: prior solved forms substituted in, then linearized.
    std::unordered_map<uint32_t, Term> prior;
    for (size_t j = 0; j < i; ++j) prior.emplace(universals[j].id, ts[j]);
    std::vector<Term> candidates;
    {
      std::unordered_set<Term> seen;
      for (Term l : projected) {
        Term lsub = substitute(store, l, prior);
        for (Term lin : linearize(store, xi, interp, lsub))
          if (lin->kind == Kind::Relation && seen.insert(lin).second)
            candidates.push_back(lin);
      }
    }
    Term ti = nullptr;
    if (!candidates.empty()) {
      // choose: smallest structural size, ties by construction order.
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](Term a, Term b) { return term_size(a) < term_size(b); });
      try {
        ti = solve_literal(store, catalog, xi, candidates.front()).term;
      } catch (const UnsupportedError&) {
      } catch (const PreconditionError&) {
      }
    }
    if (ti == nullptr) {
      // Universals absent from the countermodel (they do not occur in any
      // asserted formula) take value zero.
      BitVec v = interp.contains(xi)
                     ? interp.get_bv(xi)
                     : BitVec::zero(store.var_sort(xi).width());
      ti = store.bv_const(v);
      ++out.model_fallbacks;
    }
    ts[i] = ti;
    for (size_t j = 0; j < i; ++j)
      ts[j] = substitute(store, ts[j], xi, ti);
  }
  return out;
}

Term eliminate_choices(TermStore& store, Term t, std::vector<Term>& defs,
                       uint64_t* counter) {
  if (!contains_choice(t)) return t;
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  for (Term k : t->kids)
    kids.push_back(eliminate_choices(store, k, defs, counter));
  switch (t->kind) {
    case Kind::Choice: {
      VarId k = store.fresh_var("k", t->sort);
      Term kt = store.var(k);
      defs.push_back(substitute(store, kids[0], t->var, kt));
      if (counter) ++*counter;
      return kt;
    }
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

CegqiVerdict cegqi_check(TermStore& store, const IcCatalog& catalog,
                         const Problem& problem, const CegqiOptions& opts) {
  CegqiVerdict verdict;
  std::vector<Term> gamma;  // one conjoined formula per instance
  std::unordered_set<Term> instances;
  Term neg_psi = store.mk_not(problem.matrix);

  auto fill_outer_model = [&](const Interpretation& src) {
    Interpretation out;
    for (VarId y : problem.outer) {
      Sort sort = store.var_sort(y);
      if (src.contains(y))
        out.set(y, src.get(y));
      else if (sort.is_bool())
        out.set(y, false);
      else
        out.set(y, BitVec::zero(sort.width()));
    }
    return out;
  };

  for (;;) {
    ++verdict.stats.rounds;

    // 1. Is the instance set unsatisfiable?
    GroundVerdict ground_gamma;
    if (gamma.empty()) {
      ground_gamma.kind = GroundVerdict::Kind::Sat;
    } else {
      ground_gamma =
          ground_check(store, store.mk_and(gamma), opts.backend, opts.check);
    }
    if (ground_gamma.kind == GroundVerdict::Kind::ResourceOut) {
      verdict.kind = CegqiVerdict::Kind::ResourceOut;
      verdict.diagnostic = "ground backend: " + ground_gamma.diagnostic;
      return verdict;
    }
    if (ground_gamma.kind == GroundVerdict::Kind::Unsat) {
      verdict.kind = CegqiVerdict::Kind::Unsat;
      return verdict;
    }

    // 2. Does the instance set entail the universal body?
    std::vector<Term> gamma_prime = gamma;
    gamma_prime.push_back(neg_psi);
    GroundVerdict ground_cex =
        ground_check(store, store.mk_and(gamma_prime), opts.backend, opts.check);
    if (ground_cex.kind == GroundVerdict::Kind::ResourceOut) {
      verdict.kind = CegqiVerdict::Kind::ResourceOut;
      verdict.diagnostic = "ground backend: " + ground_cex.diagnostic;
      return verdict;
    }
    if (ground_cex.kind == GroundVerdict::Kind::Unsat) {
      verdict.kind = CegqiVerdict::Kind::Sat;
      verdict.model = fill_outer_model(ground_gamma.model);
      return verdict;
    }

    // 3. Select instantiation terms from the countermodel.
    if (verdict.stats.instantiations >= opts.max_instantiations) {
      verdict.kind = CegqiVerdict::Kind::ResourceOut;
      verdict.diagnostic = "instantiation budget of " +
                           std::to_string(opts.max_instantiations) +
                           " exhausted";
      return verdict;
    }
    const Interpretation& counter_model = ground_cex.model;
    SelectOutcome selected = select_terms(store, catalog, opts.config,
                                          problem.universals, problem.matrix,
                                          counter_model);
    verdict.stats.model_fallbacks += selected.model_fallbacks;

    std::unordered_map<uint32_t, Term> sigma;
    for (size_t i = 0; i < problem.universals.size(); ++i)
      sigma.emplace(problem.universals[i].id, selected.terms[i]);
    // Choice binders are freshly named by solve; compare instances modulo
    // those names, or repeated selections would never be detected.
    Term instance =
        alpha_normalize(store, substitute(store, problem.matrix, sigma));

    RoundLog log;
    bool duplicate = instances.count(instance) != 0;
    if (duplicate) {
      // Two-tiered fallback: re-select with model values. A repeated
      // instance under the model-value configuration itself would
      // contradict its monotonicity, hence the hard error.
      if (opts.config == Config::ModelValue)
        throw Error("duplicate instance under model-value selection");
      ++verdict.stats.duplicate_retries;
      log.duplicate_retry = true;
      SelectOutcome retry =
          select_terms(store, catalog, Config::ModelValue, problem.universals,
                       problem.matrix, counter_model);
      verdict.stats.model_fallbacks += retry.model_fallbacks;
      selected = std::move(retry);
      sigma.clear();
      for (size_t i = 0; i < problem.universals.size(); ++i)
        sigma.emplace(problem.universals[i].id, selected.terms[i]);
      instance =
          alpha_normalize(store, substitute(store, problem.matrix, sigma));
      if (instances.count(instance))
        throw Error("duplicate instance under model-value selection");
    }
    instances.insert(instance);

    std::vector<Term> defs;
    Term ground_instance = eliminate_choices(
        store, instance, defs, &verdict.stats.choice_constants);
    defs.insert(defs.begin(), ground_instance);
    gamma.push_back(store.mk_and(std::move(defs)));
    ++verdict.stats.instantiations;

    if (opts.collect_log) {
      std::ostringstream ms;
      for (const auto& [v, val] : counter_model.entries()) {
        ms << store.var_name(v) << "=";
        if (std::holds_alternative<bool>(val))
          ms << (std::get<bool>(val) ? "true" : "false");
        else
          ms << "#b" << std::get<BitVec>(val).to_binary_string();
        ms << " ";
      }
      log.model = ms.str();
      for (Term t : selected.terms)
        log.chosen_terms.push_back(to_smtlib(store, t));
      log.model_fallback = selected.model_fallbacks > 0;
      verdict.log.push_back(std::move(log));
    }
  }
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

namespace {

Term nnf(TermStore& store, Term t, bool positive) {
  switch (t->kind) {
    case Kind::BoolConst:
      return store.bool_const(positive == t->bval);
    case Kind::Relation:
      if (positive) return t;
      return store.rel(complement(t->rel), t->kids[0], t->kids[1]);
    case Kind::Var:
      return positive ? t : store.mk_not(t);
    case Kind::Not:
      return nnf(store, t->kids[0], !positive);
    case Kind::And:
    case Kind::Or: {
      std::vector<Term> kids;
      kids.reserve(t->kids.size());
      for (Term k : t->kids) kids.push_back(nnf(store, k, positive));
      bool conj = (t->kind == Kind::And) == positive;
      return conj ? store.mk_and(std::move(kids))
                  : store.mk_or(std::move(kids));
    }
    case Kind::Implies: {
      Term a = nnf(store, t->kids[0], !positive);
      Term b = nnf(store, t->kids[1], positive);
      return positive ? store.mk_or(a, b) : store.mk_and(a, b);
    }
    case Kind::Iff:
    case Kind::Ite:
      if (!is_quantifier_free(t))
        throw UnsupportedError(
            "quantifiers below ite or iff are outside the supported fragment");
      return positive ? t : store.mk_not(t);
    case Kind::Forall:
    case Kind::Exists: {
      Term body = nnf(store, t->kids[0], positive);
      bool forall = (t->kind == Kind::Forall) == positive;
      return forall ? store.forall(t->binders, body)
                    : store.exists(t->binders, body);
    }
    case Kind::Choice:
      throw UnsupportedError("choice binders are not accepted in inputs");
    default:
      throw SortError("malformed formula");
  }
}

struct QuantBlock {
  bool is_forall;
  std::vector<VarId> vars;
};

// Pulls quantifiers of an NNF formula to the front, freshening binders.
Term pull_quantifiers(TermStore& store, Term t,
                      std::vector<QuantBlock>& blocks) {
  switch (t->kind) {
    case Kind::Forall:
    case Kind::Exists: {
      std::unordered_map<uint32_t, Term> renaming;
      std::vector<VarId> fresh;
      fresh.reserve(t->binders.size());
      for (size_t i = 0; i < t->binders.size(); ++i) {
        VarId nv = store.fresh_var(store.var_name(t->binders[i]),
                                   t->binder_sorts[i]);
        fresh.push_back(nv);
        renaming.emplace(t->binders[i].id, store.var(nv));
      }
      Term body = substitute(store, t->kids[0], renaming);
      blocks.push_back(QuantBlock{t->kind == Kind::Forall, std::move(fresh)});
      return pull_quantifiers(store, body, blocks);
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Term> kids;
      kids.reserve(t->kids.size());
      for (Term k : t->kids)
        kids.push_back(pull_quantifiers(store, k, blocks));
      return t->kind == Kind::And ? store.mk_and(std::move(kids))
                                  : store.mk_or(std::move(kids));
    }
    default:
      if (!is_quantifier_free(t))
        throw UnsupportedError(
            "quantifiers in this position are outside the supported fragment");
      return t;
  }
}

std::vector<QuantBlock> merge_blocks(const std::vector<QuantBlock>& in) {
  std::vector<QuantBlock> out;
  for (const QuantBlock& b : in) {
    if (b.vars.empty()) continue;
    if (!out.empty() && out.back().is_forall == b.is_forall)
      out.back().vars.insert(out.back().vars.end(), b.vars.begin(),
                             b.vars.end());
    else
      out.push_back(b);
  }
  return out;
}

void flatten_or(Term t, std::vector<Term>& out) {
  if (t->kind == Kind::Or) {
    for (Term k : t->kids) flatten_or(k, out);
    return;
  }
  out.push_back(t);
}

// Destructive equality resolution: forall x. (e[x] != t or R) becomes
// R[x -> r] when the equality solves for x without choice. Single-literal
// matrices are left alone so they run through the instantiation loop.
void apply_der(TermStore& store, const IcCatalog& catalog, Term& matrix,
               std::vector<VarId>& universals) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Term> disjuncts;
    flatten_or(matrix, disjuncts);
    if (disjuncts.size() < 2) return;
    for (size_t d = 0; d < disjuncts.size() && !changed; ++d) {
      Term lit = disjuncts[d];
      if (lit->kind != Kind::Relation || lit->rel != Rel::Ne) continue;
      Term eq = store.eq(lit->kids[0], lit->kids[1]);
      for (size_t i = 0; i < universals.size() && !changed; ++i) {
        VarId x = universals[i];
        if (!is_linear_in(eq, x)) continue;
        SolvedForm solved;
        try {
          solved = solve_literal(store, catalog, x, eq);
        } catch (const Error&) {
          continue;
        }
        if (solved.used_choice) continue;
        std::vector<Term> rest;
        for (size_t j = 0; j < disjuncts.size(); ++j)
          if (j != d) rest.push_back(disjuncts[j]);
        Term reduced = store.mk_or(std::move(rest));
        matrix = substitute(store, reduced, x, solved.term);
        universals.erase(universals.begin() + i);
        changed = true;
      }
    }
  }
}

// Region splitting for universals below extract: x is replaced by a
// concatenation of fresh universal variables cut at every extract
// boundary, making instantiations like a . b reachable.
struct RegionSplit {
  Term rewritten;
  std::vector<VarId> regions;  // LSB first
};

Term rewrite_extracts(TermStore& store, Term t, VarId x, Term whole,
                      const std::vector<std::pair<uint32_t, VarId>>& regions) {
  if (t->kind == Kind::Var) return t->var == x ? whole : t;
  if (t->kids.empty()) return t;
  if (t->kind == Kind::BvOperator && t->op == BvOp::Extract &&
      t->kids[0]->kind == Kind::Var && t->kids[0]->var == x) {
    // Covered exactly by a run of regions.
    std::vector<Term> parts;  // MSB first
    uint32_t base = 0;
    for (const auto& [width, var] : regions) {
      uint32_t hi = base + width - 1;
      if (base >= t->lo && hi <= t->hi)
        parts.insert(parts.begin(), store.var(var));
      base += width;
    }
    Term acc = parts.front();
    for (size_t i = 1; i < parts.size(); ++i)
      acc = store.bvop(BvOp::Concat, acc, parts[i]);
    return acc;
  }
  std::vector<Term> kids;
  kids.reserve(t->kids.size());
  bool changed = false;
  for (Term k : t->kids) {
    Term k2 = rewrite_extracts(store, k, x, whole, regions);
    changed |= k2 != k;
    kids.push_back(k2);
  }
  if (!changed) return t;
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
    default:
      throw UnsupportedError("unexpected binder during extract splitting");
  }
}

void collect_extract_bounds(Term t, VarId x, std::set<uint32_t>& cuts,
                            bool& any) {
  if (t->kind == Kind::BvOperator && t->op == BvOp::Extract &&
      t->kids[0]->kind == Kind::Var && t->kids[0]->var == x) {
    any = true;
    cuts.insert(t->lo);
    cuts.insert(t->hi + 1);
    return;
  }
  for (Term k : t->kids) collect_extract_bounds(k, x, cuts, any);
}

void split_extracted_universals(TermStore& store, Term& matrix,
                                std::vector<VarId>& universals) {
  for (size_t i = 0; i < universals.size();) {
    VarId x = universals[i];
    uint32_t w = store.var_sort(x).width();
    std::set<uint32_t> cuts{0, w};
    bool any = false;
    collect_extract_bounds(matrix, x, cuts, any);
    if (!any || cuts.size() <= 2) {
      // No extract on x, or only the full-width slice; nothing to split,
      // but still drop full-width extract nodes when present.
      if (any) {
        std::vector<std::pair<uint32_t, VarId>> single{{w, x}};
        matrix = rewrite_extracts(store, matrix, x, store.var(x), single);
      }
      ++i;
      continue;
    }
    std::vector<std::pair<uint32_t, VarId>> regions;  // LSB first
    uint32_t prev = 0;
    std::string base_name = store.var_name(x);
    for (uint32_t cut : cuts) {
      if (cut == 0) continue;
      VarId region = store.fresh_var(base_name, Sort::bv(cut - prev));
      regions.emplace_back(cut - prev, region);
      prev = cut;
    }
    // x itself denotes the MSB-first concatenation of the regions.
    Term whole = store.var(regions.back().second);
    for (size_t r = regions.size() - 1; r-- > 0;)
      whole = store.bvop(BvOp::Concat, whole, store.var(regions[r].second));
    matrix = rewrite_extracts(store, matrix, x, whole, regions);
    universals.erase(universals.begin() + i);
    for (const auto& [width, var] : regions)
      universals.insert(universals.begin() + i, var);
  }
}

}  // namespace

Problem preprocess(TermStore& store, const std::vector<Term>& assertions,
                   const std::vector<VarId>& declared_consts) {
  Term phi = store.mk_and(assertions);
  Term normal = nnf(store, phi, true);

  std::vector<QuantBlock> raw_blocks;
  Term matrix = pull_quantifiers(store, normal, raw_blocks);
  std::vector<QuantBlock> blocks = merge_blocks(raw_blocks);

  Problem problem;
  for (VarId c : declared_consts)
    if (occurs_free(c, phi)) problem.outer.push_back(c);

  // Leading existential block joins the free constants.
  size_t b = 0;
  if (b < blocks.size() && !blocks[b].is_forall) {
    problem.outer.insert(problem.outer.end(), blocks[b].vars.begin(),
                         blocks[b].vars.end());
    ++b;
  }

  if (b + 2 < blocks.size() ||
      (b + 2 == blocks.size() &&
       !(blocks[b].is_forall && !blocks[b + 1].is_forall)))
    throw UnsupportedError(
        "quantifier prefix has more than one alternation");

  if (b + 2 == blocks.size()) {
    // forall-exists tail: handled by refuting the negation when the input
    // is closed; otherwise the prefix has two alternations.
    if (!problem.outer.empty())
      throw UnsupportedError(
          "quantifier prefix has more than one alternation");
    problem.negated = true;
    problem.outer = blocks[b].vars;        // the old forall block
    problem.universals = blocks[b + 1].vars;
    matrix = nnf(store, matrix, false);
  } else if (b + 1 == blocks.size()) {
    if (!blocks[b].is_forall) {
      // A second existential block would have been merged; unreachable.
      problem.outer.insert(problem.outer.end(), blocks[b].vars.begin(),
                           blocks[b].vars.end());
    } else {
      problem.universals = blocks[b].vars;
    }
  }

  apply_der(store, IcCatalog(store), matrix, problem.universals);
  split_extracted_universals(store, matrix, problem.universals);
  matrix = linearizing_rewrite(store, matrix);
  problem.matrix = matrix;
  return problem;
}

}  // namespace qbv
