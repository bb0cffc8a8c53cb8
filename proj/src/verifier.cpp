#include "qbv/verifier.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "qbv/eval_program.hpp"
#include "qbv/printer.hpp"

namespace qbv {

RowWidths row_widths(IcKey key, uint32_t w) {
  RowWidths rw;
  rw.xw = w;
  switch (key.op) {
    case IcOp::BaseX:
    case IcOp::Not:
    case IcOp::Neg:
      rw.tw = w;
      break;
    case IcOp::Extract:
      rw.hi = w - 1;
      rw.lo = w / 2;
      rw.tw = rw.hi - rw.lo + 1;
      break;
    case IcOp::Concat:
      rw.sw = w;
      rw.tw = 2 * w;
      break;
    default:
      rw.sw = w;
      rw.tw = w;
      break;
  }
  return rw;
}

Term row_literal(TermStore& store, IcKey key, Term x, Term s, Term t) {
  Term lhs = nullptr;
  switch (key.op) {
    case IcOp::BaseX: lhs = x; break;
    case IcOp::Not: lhs = store.bnot(x); break;
    case IcOp::Neg: lhs = store.neg(x); break;
    case IcOp::Extract: {
      uint32_t w = x->sort.width();
      lhs = store.extract(x, w - 1, w / 2);
      break;
    }
    case IcOp::Add: lhs = store.add(x, s); break;
    case IcOp::Mul: lhs = store.mul(x, s); break;
    case IcOp::And: lhs = store.bvop(BvOp::And, x, s); break;
    case IcOp::Or: lhs = store.bvop(BvOp::Or, x, s); break;
    case IcOp::Urem:
    case IcOp::Udiv:
    case IcOp::Lshr:
    case IcOp::Ashr:
    case IcOp::Shl:
    case IcOp::Concat: {
      BvOp op = key.op == IcOp::Urem   ? BvOp::Urem
                : key.op == IcOp::Udiv ? BvOp::Udiv
                : key.op == IcOp::Lshr ? BvOp::Lshr
                : key.op == IcOp::Ashr ? BvOp::Ashr
                : key.op == IcOp::Shl  ? BvOp::Shl
                                       : BvOp::Concat;
      lhs = key.side == IcSide::Left ? store.bvop(op, x, s)
                                     : store.bvop(op, s, x);
      break;
    }
  }
  return store.rel(key.rel, lhs, t);
}

VerificationReport sweep_equivalence(IcKey entry, uint32_t width, VarId x,
                                     std::optional<VarId> s, VarId t,
                                     Term lit, Term cond,
                                     const TermStore& store) {
  VerificationReport report;
  report.entry = entry;
  report.width = width;
  auto start = std::chrono::steady_clock::now();

  if (occurs_free(x, cond)) {
    report.status = VerificationReport::Status::Refuted;
    report.skip_reason = "condition mentions the solved variable";
    return report;
  }

  std::vector<VarId> slots{x, t};
  if (s) slots.push_back(*s);
  EvalProgram lit_prog = EvalProgram::compile(lit, slots);
  EvalProgram cond_prog = EvalProgram::compile(cond, slots);

  uint32_t xw = store.var_sort(x).width();
  uint32_t tw = store.var_sort(t).width();
  uint64_t x_count = uint64_t{1} << xw;
  uint64_t t_count = uint64_t{1} << tw;
  uint64_t s_count = s ? uint64_t{1} << store.var_sort(*s).width() : 1;

  uint64_t vals[3] = {0, 0, 0};
  for (uint64_t sv = 0; sv < s_count; ++sv) {
    vals[2] = sv;
    for (uint64_t tv = 0; tv < t_count; ++tv) {
      vals[1] = tv;
      vals[0] = 0;
      bool cond_holds = cond_prog.run(vals) != 0;
      bool exists = false;
      for (uint64_t xv = 0; xv < x_count; ++xv) {
        vals[0] = xv;
        if (lit_prog.run(vals) != 0) {
          exists = true;
          break;
        }
      }
      ++report.pairs;
      if (cond_holds != exists) {
        report.status = VerificationReport::Status::Refuted;
        if (s) report.ce_s = BitVec(store.var_sort(*s).width(), sv);
        report.ce_t = BitVec(tw, tv);
        report.condition_value = cond_holds;
        report.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        return report;
      }
    }
  }
  report.status = VerificationReport::Status::Verified;
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

VerificationReport verify_ic(TermStore& store, const IcCatalog& catalog,
                             IcKey entry, uint32_t width, uint32_t cap) {
  VerificationReport report;
  report.entry = entry;
  report.width = width;
  if (width > cap) {
    report.status = VerificationReport::Status::Skipped;
    report.skip_reason = "width above the exhaustive cap of " +
                         std::to_string(cap);
    return report;
  }
  RowWidths rw = row_widths(entry, width);
  VarId x = store.fresh_var("vx", Sort::bv(rw.xw));
  VarId t = store.fresh_var("vt", Sort::bv(rw.tw));
  std::optional<VarId> s;
  Term s_term = nullptr;
  if (rw.has_s()) {
    s = store.fresh_var("vs", Sort::bv(rw.sw));
    s_term = store.var(*s);
  }
  Term lit = row_literal(store, entry, store.var(x), s_term, store.var(t));
  Term cond = catalog.get_ic(x, lit);
  return sweep_equivalence(entry, width, x, s, t, lit, cond, store);
}

VerifySummary verify_all(TermStore& store, const IcCatalog& catalog,
                         uint32_t width_min, uint32_t width_max, unsigned jobs,
                         const std::vector<IcKey>* only) {
  auto start = std::chrono::steady_clock::now();
  std::vector<IcKey> keys = only ? *only : catalog.entries();
  struct Task {
    IcKey key;
    uint32_t width;
  };
  std::vector<Task> tasks;
  for (uint32_t w = width_min; w <= width_max; ++w)
    for (IcKey key : keys) tasks.push_back({key, w});

  VerifySummary summary;
  summary.reports.resize(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      summary.reports[i] =
          verify_ic(store, catalog, tasks[i].key, tasks[i].width);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& r : summary.reports) {
    auto& row = summary.per_width[r.width];
    switch (r.status) {
      case VerificationReport::Status::Verified:
        ++row[0];
        ++summary.verified;
        break;
      case VerificationReport::Status::Refuted:
        ++row[1];
        ++summary.refuted;
        break;
      case VerificationReport::Status::Skipped:
        ++row[2];
        ++summary.skipped;
        break;
    }
  }
  summary.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return summary;
}

namespace {

std::string status_name(VerificationReport::Status s) {
  switch (s) {
    case VerificationReport::Status::Verified: return "verified";
    case VerificationReport::Status::Refuted: return "refuted";
    case VerificationReport::Status::Skipped: return "skipped";
  }
  return "?";
}

}  // namespace

std::string summary_table(const VerifySummary& summary) {
  std::ostringstream os;
  os << "width  verified  refuted  skipped\n";
  for (const auto& [w, row] : summary.per_width) {
    os << w;
    for (size_t pad = std::to_string(w).size(); pad < 5; ++pad) os << ' ';
    os << "  " << row[0] << "\t " << row[1] << "\t  " << row[2] << "\n";
  }
  os << "total  " << summary.verified << "\t " << summary.refuted << "\t  "
     << summary.skipped << "\n";
  for (const auto& r : summary.reports) {
    if (r.status != VerificationReport::Status::Refuted) continue;
    os << "refuted: " << to_string(r.entry) << " width " << r.width;
    if (r.ce_s) os << " s=" << r.ce_s->to_binary_string();
    if (r.ce_t) os << " t=" << r.ce_t->to_binary_string();
    os << " condition=" << (r.condition_value ? "true" : "false") << "\n";
  }
  return os.str();
}

std::string summary_records(const VerifySummary& summary) {
  std::ostringstream os;
  for (const auto& r : summary.reports) {
    os << to_string(r.entry) << " " << r.width << " " << status_name(r.status);
    if (r.status == VerificationReport::Status::Refuted) {
      os << " s=" << (r.ce_s ? r.ce_s->to_binary_string() : "-")
         << " t=" << (r.ce_t ? r.ce_t->to_binary_string() : "-");
    }
    if (r.status == VerificationReport::Status::Skipped)
      os << " " << r.skip_reason;
    os << "\n";
  }
  return os.str();
}

std::string emit_verification_smt2(TermStore& store, const IcCatalog& catalog,
                                   IcKey entry, uint32_t width) {
  RowWidths rw = row_widths(entry, width);
  VarId x = store.fresh_var("x", Sort::bv(rw.xw));
  VarId s;
  Term s_term = nullptr;
  VarId t = store.mk_var("t", Sort::bv(rw.tw));
  if (rw.has_s()) {
    s = store.mk_var("s", Sort::bv(rw.sw));
    s_term = store.var(s);
  }
  Term lit = row_literal(store, entry, store.var(x), s_term, store.var(t));
  Term cond = catalog.get_ic(x, lit);
  Term equiv = store.iff(cond, store.exists({x}, lit));

  std::ostringstream os;
  os << "; invertibility condition check: " << to_string(entry) << ", width "
     << width << "\n";
  os << "; expected answer: unsat\n";
  os << "(set-logic BV)\n";
  if (rw.has_s())
    os << "(declare-const s " << sort_smtlib(Sort::bv(rw.sw)) << ")\n";
  os << "(declare-const t " << sort_smtlib(Sort::bv(rw.tw)) << ")\n";
  os << "(assert (not " << to_smtlib(store, equiv) << "))\n";
  os << "(check-sat)\n";
  return os.str();
}

std::vector<SygusShape> sygus_shapes() {
  return {
      {IcOp::BaseX, IcSide::Unary}, {IcOp::Mul, IcSide::Left},
      {IcOp::And, IcSide::Left},    {IcOp::Or, IcSide::Left},
      {IcOp::Urem, IcSide::Left},   {IcOp::Urem, IcSide::Right},
      {IcOp::Udiv, IcSide::Left},   {IcOp::Udiv, IcSide::Right},
      {IcOp::Lshr, IcSide::Left},   {IcOp::Lshr, IcSide::Right},
      {IcOp::Ashr, IcSide::Left},   {IcOp::Ashr, IcSide::Right},
      {IcOp::Shl, IcSide::Left},    {IcOp::Shl, IcSide::Right},
  };
}

std::string emit_sygus(TermStore& store, SygusShape shape, Rel rel,
                       SygusGrammar grammar, uint32_t width) {
  IcKey key{shape.op, shape.side, rel};
  VarId s = store.mk_var("s", Sort::bv(width));
  VarId t = store.mk_var("t", Sort::bv(width));
  Term s_term = store.var(s);
  Term t_term = store.var(t);

  std::vector<Term> disjuncts;
  uint64_t count = uint64_t{1} << width;
  for (uint64_t i = 0; i < count; ++i) {
    Term xi = store.num(i, width);
    Term lit = shape.op == IcOp::BaseX
                   ? store.rel(rel, xi, t_term)
                   : row_literal(store, key, xi, s_term, t_term);
    disjuncts.push_back(lit);
  }
  Term expanded = store.mk_or(std::move(disjuncts));

  std::string bv = sort_smtlib(Sort::bv(width));
  std::string mins = "#b" + BitVec::min_signed(width).to_binary_string();
  std::string maxs = "#b" + BitVec::max_signed(width).to_binary_string();
  std::string zero = "#b" + BitVec::zero(width).to_binary_string();

  std::ostringstream os;
  os << "; synthesis of the invertibility condition for "
     << to_string(key) << " at width " << width << "\n";
  os << "(set-logic BV)\n\n";
  os << "(synth-fun IC ((s " << bv << ") (t " << bv << ")) Bool\n";
  os << "  ((Start Bool) (V " << bv << "))\n";
  os << "  ((Start Bool (\n";
  os << "     (not Start)\n";
  os << "     (and Start Start)\n";
  if (grammar == SygusGrammar::General) os << "     (or Start Start)\n";
  os << "     (= V V)\n";
  os << "     (bvult V V)\n";
  os << "     (bvslt V V)";
  if (grammar == SygusGrammar::General)
    os << "\n     (bvuge V V)\n     (bvsge V V)";
  os << "))\n";
  os << "   (V " << bv << " (\n";
  os << "     s t " << zero << " " << mins << " " << maxs << "\n";
  os << "     (bvnot V)\n";
  os << "     (bvneg V)\n";
  if (grammar == SygusGrammar::General) os << "     (bvadd V V)\n";
  os << "     (bvand V V)\n";
  os << "     (bvor V V)";
  if (grammar == SygusGrammar::General)
    os << "\n     (bvlshr V V)\n     (bvshl V V)";
  os << "))))\n\n";
  os << "(declare-var s " << bv << ")\n";
  os << "(declare-var t " << bv << ")\n\n";
  os << "(constraint (= " << to_smtlib(store, expanded) << " (IC s t)))\n\n";
  os << "(check-synth)\n";
  return os.str();
}

}  // namespace qbv
