#include "qbv/printer.hpp"

#include <sstream>

namespace qbv {

namespace {

void print_rec(const TermStore& store, Term t, std::ostream& os) {
  switch (t->kind) {
    case Kind::BvConst:
      os << "#b" << t->bits.to_binary_string();
      return;
    case Kind::BoolConst:
      os << (t->bval ? "true" : "false");
      return;
    case Kind::Var:
      os << store.var_name(t->var);
      return;
    case Kind::BvOperator:
      if (t->op == BvOp::Extract) {
        os << "((_ extract " << t->hi << " " << t->lo << ") ";
        print_rec(store, t->kids[0], os);
        os << ")";
        return;
      }
      os << "(" << smtlib_name(t->op);
      for (Term k : t->kids) {
        os << " ";
        print_rec(store, k, os);
      }
      os << ")";
      return;
    case Kind::Relation:
      os << "(" << smtlib_name(t->rel) << " ";
      print_rec(store, t->kids[0], os);
      os << " ";
      print_rec(store, t->kids[1], os);
      os << ")";
      return;
    case Kind::Not:
      os << "(not ";
      print_rec(store, t->kids[0], os);
      os << ")";
      return;
    case Kind::And:
    case Kind::Or: {
      os << (t->kind == Kind::And ? "(and" : "(or");
      for (Term k : t->kids) {
        os << " ";
        print_rec(store, k, os);
      }
      os << ")";
      return;
    }
    case Kind::Implies:
      os << "(=> ";
      print_rec(store, t->kids[0], os);
      os << " ";
      print_rec(store, t->kids[1], os);
      os << ")";
      return;
    case Kind::Iff:
      os << "(= ";
      print_rec(store, t->kids[0], os);
      os << " ";
      print_rec(store, t->kids[1], os);
      os << ")";
      return;
    case Kind::Ite:
      os << "(ite ";
      print_rec(store, t->kids[0], os);
      os << " ";
      print_rec(store, t->kids[1], os);
      os << " ";
      print_rec(store, t->kids[2], os);
      os << ")";
      return;
    case Kind::Choice:
      os << "(choice ((" << store.var_name(t->var) << " "
         << sort_smtlib(t->sort) << ")) ";
      print_rec(store, t->kids[0], os);
      os << ")";
      return;
    case Kind::Forall:
    case Kind::Exists: {
      os << (t->kind == Kind::Forall ? "(forall (" : "(exists (");
      for (size_t i = 0; i < t->binders.size(); ++i) {
        if (i) os << " ";
        os << "(" << store.var_name(t->binders[i]) << " "
           << sort_smtlib(t->binder_sorts[i]) << ")";
      }
      os << ") ";
      print_rec(store, t->kids[0], os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string sort_smtlib(Sort s) {
  if (s.is_bool()) return "Bool";
  return "(_ BitVec " + std::to_string(s.width()) + ")";
}

std::string to_smtlib(const TermStore& store, Term t) {
  std::ostringstream os;
  print_rec(store, t, os);
  return os.str();
}

std::string model_smtlib(const TermStore& store, const Interpretation& interp) {
  std::ostringstream os;
  for (const auto& [v, val] : interp.entries()) {
    os << "(define-fun " << store.var_name(v) << " () ";
    if (std::holds_alternative<bool>(val)) {
      os << "Bool " << (std::get<bool>(val) ? "true" : "false");
    } else {
      const BitVec& bv = std::get<BitVec>(val);
      os << sort_smtlib(Sort::bv(bv.width())) << " #b"
         << bv.to_binary_string();
    }
    os << ")\n";
  }
  return os.str();
}

}  // namespace qbv
