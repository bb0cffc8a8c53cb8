#include "qbv/bitblast.hpp"

namespace qbv {

namespace {

class Blaster {
 public:
  Blaster() {
    lit_true_ = out.cnf.new_var();
    out.cnf.add_unit(lit_true_);
  }

  BitBlastResult take(Term root) {
    int r = blast_bool(root);
    out.cnf.add_unit(r);
    return std::move(out);
  }

  BitBlastResult out;

 private:
  int lit_true_;
  std::unordered_map<Term, std::vector<int>> bv_cache_;
  std::unordered_map<Term, int> bool_cache_;

  int tru() const { return lit_true_; }
  int fls() const { return -lit_true_; }

  bool is_const(int l) const { return l == lit_true_ || l == -lit_true_; }
  bool const_val(int l) const { return l == lit_true_; }

  int mk_and(int a, int b) {
    if (is_const(a)) return const_val(a) ? b : fls();
    if (is_const(b)) return const_val(b) ? a : fls();
    if (a == b) return a;
    if (a == -b) return fls();
    int g = out.cnf.new_var();
    out.cnf.add_binary(-g, a);
    out.cnf.add_binary(-g, b);
    out.cnf.add_ternary(g, -a, -b);
    return g;
  }

  int mk_or(int a, int b) { return -mk_and(-a, -b); }

  int mk_xor(int a, int b) {
    if (is_const(a)) return const_val(a) ? -b : b;
    if (is_const(b)) return const_val(b) ? -a : a;
    if (a == b) return fls();
    if (a == -b) return tru();
    int g = out.cnf.new_var();
    out.cnf.add_ternary(-g, a, b);
    out.cnf.add_ternary(-g, -a, -b);
    out.cnf.add_ternary(g, -a, b);
    out.cnf.add_ternary(g, a, -b);
    return g;
  }

  int mk_mux(int c, int a, int b) {  // c ? a : b
    if (is_const(c)) return const_val(c) ? a : b;
    if (a == b) return a;
    int g = out.cnf.new_var();
    out.cnf.add_ternary(-c, -a, g);
    out.cnf.add_ternary(-c, a, -g);
    out.cnf.add_ternary(c, -b, g);
    out.cnf.add_ternary(c, b, -g);
    return g;
  }

  int big_and(const std::vector<int>& ls) {
    int acc = tru();
    for (int l : ls) acc = mk_and(acc, l);
    return acc;
  }

  int big_or(const std::vector<int>& ls) {
    int acc = fls();
    for (int l : ls) acc = mk_or(acc, l);
    return acc;
  }

  // --- word-level helpers (vectors are LSB first) ---

  std::vector<int> const_bits(const BitVec& v) {
    std::vector<int> bits(v.width());
    for (uint32_t i = 0; i < v.width(); ++i)
      bits[i] = v.bit(i) ? tru() : fls();
    return bits;
  }

  std::vector<int> mk_adder(const std::vector<int>& a,
                            const std::vector<int>& b, int cin,
                            int* cout = nullptr) {
    std::vector<int> sum(a.size());
    int carry = cin;
    for (size_t i = 0; i < a.size(); ++i) {
      int axb = mk_xor(a[i], b[i]);
      sum[i] = mk_xor(axb, carry);
      carry = mk_or(mk_and(a[i], b[i]), mk_and(axb, carry));
    }
    if (cout) *cout = carry;
    return sum;
  }

  std::vector<int> mk_neg(const std::vector<int>& a) {
    std::vector<int> na(a.size());
    for (size_t i = 0; i < a.size(); ++i) na[i] = -a[i];
    return mk_adder(na, const_bits(BitVec::zero(a.size())), tru());
  }

  std::vector<int> mk_sub(const std::vector<int>& a,
                          const std::vector<int>& b) {
    std::vector<int> nb(b.size());
    for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
    return mk_adder(a, nb, tru());
  }

  // a >=u b as carry-out of a + ~b + 1.
  int mk_uge(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> nb(b.size());
    for (size_t i = 0; i < b.size(); ++i) nb[i] = -b[i];
    int carry;
    mk_adder(a, nb, tru(), &carry);
    return carry;
  }

  int mk_eq(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> bits(a.size());
    for (size_t i = 0; i < a.size(); ++i) bits[i] = -mk_xor(a[i], b[i]);
    return big_and(bits);
  }

  std::vector<int> mk_mul(const std::vector<int>& a,
                          const std::vector<int>& b) {
    size_t w = a.size();
    std::vector<int> acc(w, fls());
    for (size_t i = 0; i < w; ++i) {
      // (a << i) masked by b[i], added into the accumulator.
      std::vector<int> addend(w, fls());
      for (size_t j = i; j < w; ++j) addend[j] = mk_and(a[j - i], b[i]);
      acc = mk_adder(acc, addend, fls());
    }
    return acc;
  }

  // Number of barrel stages for width w: smallest k with 2^k >= w.
  static uint32_t stage_count(size_t w) {
    uint32_t k = 0;
    while ((size_t{1} << k) < w) ++k;
    return k == 0 ? 1 : k;
  }

  std::vector<int> mk_shift(const std::vector<int>& a,
                            const std::vector<int>& b, BvOp op) {
    size_t w = a.size();
    int sign = op == BvOp::Ashr ? a[w - 1] : fls();
    uint32_t stages = stage_count(w);
    std::vector<int> res = a;
    for (uint32_t j = 0; j < stages && j < b.size(); ++j) {
      size_t sh = size_t{1} << j;
      std::vector<int> shifted(w);
      for (size_t i = 0; i < w; ++i) {
        if (op == BvOp::Shl)
          shifted[i] = i >= sh ? res[i - sh] : fls();
        else
          shifted[i] = i + sh < w ? res[i + sh] : sign;
      }
      for (size_t i = 0; i < w; ++i) res[i] = mk_mux(b[j], shifted[i], res[i]);
    }
    // Amounts with any bit at position >= stages are >= 2^stages >= w.
    std::vector<int> high;
    for (size_t j = stages; j < b.size(); ++j) high.push_back(b[j]);
    int overflow = big_or(high);
    for (size_t i = 0; i < w; ++i) res[i] = mk_mux(overflow, sign, res[i]);
    return res;
  }

  // Restoring division; quotient and remainder with the total-division
  // convention for a zero divisor.
  void mk_divrem(const std::vector<int>& a, const std::vector<int>& b,
                 std::vector<int>& quot, std::vector<int>& rem) {
    size_t w = a.size();
    std::vector<int> R(w + 1, fls());
    std::vector<int> S(b);
    S.push_back(fls());
    std::vector<int> q(w, fls());
    for (size_t step = 0; step < w; ++step) {
      size_t i = w - 1 - step;
      // R = (R << 1) | a_i
      for (size_t k = w; k > 0; --k) R[k] = R[k - 1];
      R[0] = a[i];
      int geq = mk_uge(R, S);
      std::vector<int> diff = mk_sub(R, S);
      for (size_t k = 0; k <= w; ++k) R[k] = mk_mux(geq, diff[k], R[k]);
      q[i] = geq;
    }
    R.pop_back();
    int bzero = mk_eq(b, std::vector<int>(w, fls()));
    quot.resize(w);
    rem.resize(w);
    for (size_t k = 0; k < w; ++k) {
      quot[k] = mk_mux(bzero, tru(), q[k]);
      rem[k] = mk_mux(bzero, a[k], R[k]);
    }
  }

  std::vector<int> blast_bv(Term t) {
    auto it = bv_cache_.find(t);
    if (it != bv_cache_.end()) return it->second;
    std::vector<int> bits;
    switch (t->kind) {
      case Kind::BvConst:
        bits = const_bits(t->bits);
        break;
      case Kind::Var: {
        uint32_t w = t->sort.width();
        auto vit = out.bv_bits.find(t->var.id);
        if (vit == out.bv_bits.end()) {
          std::vector<int> fresh(w);
          for (uint32_t i = 0; i < w; ++i) fresh[i] = out.cnf.new_var();
          vit = out.bv_bits.emplace(t->var.id, std::move(fresh)).first;
        }
        bits = vit->second;
        break;
      }
      case Kind::Ite: {
        int c = blast_bool(t->kids[0]);
        std::vector<int> x = blast_bv(t->kids[1]);
        std::vector<int> y = blast_bv(t->kids[2]);
        bits.resize(x.size());
        for (size_t i = 0; i < x.size(); ++i) bits[i] = mk_mux(c, x[i], y[i]);
        break;
      }
      case Kind::BvOperator: {
        switch (t->op) {
          case BvOp::Not: {
            std::vector<int> a = blast_bv(t->kids[0]);
            bits.resize(a.size());
            for (size_t i = 0; i < a.size(); ++i) bits[i] = -a[i];
            break;
          }
          case BvOp::Neg:
            bits = mk_neg(blast_bv(t->kids[0]));
            break;
          case BvOp::And:
          case BvOp::Or: {
            std::vector<int> a = blast_bv(t->kids[0]);
            std::vector<int> b = blast_bv(t->kids[1]);
            bits.resize(a.size());
            for (size_t i = 0; i < a.size(); ++i)
              bits[i] = t->op == BvOp::And ? mk_and(a[i], b[i])
                                           : mk_or(a[i], b[i]);
            break;
          }
          case BvOp::Add:
            bits = mk_adder(blast_bv(t->kids[0]), blast_bv(t->kids[1]), fls());
            break;
          case BvOp::Mul:
            bits = mk_mul(blast_bv(t->kids[0]), blast_bv(t->kids[1]));
            break;
          case BvOp::Shl:
          case BvOp::Lshr:
          case BvOp::Ashr:
            bits = mk_shift(blast_bv(t->kids[0]), blast_bv(t->kids[1]), t->op);
            break;
          case BvOp::Udiv:
          case BvOp::Urem: {
            std::vector<int> q, r;
            mk_divrem(blast_bv(t->kids[0]), blast_bv(t->kids[1]), q, r);
            bits = t->op == BvOp::Udiv ? q : r;
            break;
          }
          case BvOp::Concat: {
            std::vector<int> hi = blast_bv(t->kids[0]);
            std::vector<int> lo = blast_bv(t->kids[1]);
            bits = lo;
            bits.insert(bits.end(), hi.begin(), hi.end());
            break;
          }
          case BvOp::Extract: {
            std::vector<int> a = blast_bv(t->kids[0]);
            bits.assign(a.begin() + t->lo, a.begin() + t->hi + 1);
            break;
          }
        }
        break;
      }
      default:
        throw PreconditionError("bitblast: not a bit-vector term");
    }
    bv_cache_.emplace(t, bits);
    return bits;
  }

  int blast_rel(Rel rel, std::vector<int> a, std::vector<int> b) {
    switch (rel) {
      case Rel::Eq: return mk_eq(a, b);
      case Rel::Ne: return -mk_eq(a, b);
      case Rel::Ult: return -mk_uge(a, b);
      case Rel::Ugt: return -mk_uge(b, a);
      case Rel::Ule: return mk_uge(b, a);
      case Rel::Uge: return mk_uge(a, b);
      case Rel::Slt:
      case Rel::Sgt:
      case Rel::Sle:
      case Rel::Sge: {
        // Signed comparisons reduce to unsigned with inverted sign bits.
        a.back() = -a.back();
        b.back() = -b.back();
        Rel u = rel == Rel::Slt   ? Rel::Ult
                : rel == Rel::Sgt ? Rel::Ugt
                : rel == Rel::Sle ? Rel::Ule
                                  : Rel::Uge;
        return blast_rel(u, std::move(a), std::move(b));
      }
    }
    throw Error("bad relation");
  }

  int blast_bool(Term t) {
    auto it = bool_cache_.find(t);
    if (it != bool_cache_.end()) return it->second;
    int lit = 0;
    switch (t->kind) {
      case Kind::BoolConst:
        lit = t->bval ? tru() : fls();
        break;
      case Kind::Var: {
        auto vit = out.bool_lits.find(t->var.id);
        if (vit == out.bool_lits.end())
          vit = out.bool_lits.emplace(t->var.id, out.cnf.new_var()).first;
        lit = vit->second;
        break;
      }
      case Kind::Relation:
        lit = blast_rel(t->rel, blast_bv(t->kids[0]), blast_bv(t->kids[1]));
        break;
      case Kind::Not:
        lit = -blast_bool(t->kids[0]);
        break;
      case Kind::And: {
        std::vector<int> ls;
        ls.reserve(t->kids.size());
        for (Term k : t->kids) ls.push_back(blast_bool(k));
        lit = big_and(ls);
        break;
      }
      case Kind::Or: {
        std::vector<int> ls;
        ls.reserve(t->kids.size());
        for (Term k : t->kids) ls.push_back(blast_bool(k));
        lit = big_or(ls);
        break;
      }
      case Kind::Implies:
        lit = mk_or(-blast_bool(t->kids[0]), blast_bool(t->kids[1]));
        break;
      case Kind::Iff:
        lit = -mk_xor(blast_bool(t->kids[0]), blast_bool(t->kids[1]));
        break;
      case Kind::Ite:
        lit = mk_mux(blast_bool(t->kids[0]), blast_bool(t->kids[1]),
                     blast_bool(t->kids[2]));
        break;
      case Kind::Forall:
      case Kind::Exists:
      case Kind::Choice:
        throw PreconditionError(
            "bitblast: formula must be quantifier- and choice-free");
      default:
        throw PreconditionError("bitblast: not a Boolean term");
    }
    bool_cache_.emplace(t, lit);
    return lit;
  }
};

}  // namespace

BitBlastResult bitblast(Term phi) {
  if (!phi->sort.is_bool())
    throw PreconditionError("bitblast: root term must be Boolean");
  Blaster blaster;
  return blaster.take(phi);
}

}  // namespace qbv
