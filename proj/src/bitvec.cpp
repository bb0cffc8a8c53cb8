#include "qbv/bitvec.hpp"

namespace qbv {

namespace {

void check_same_width(const BitVec& a, const BitVec& b, const char* op) {
  if (a.width() != b.width())
    throw SortError(std::string(op) + ": width mismatch (" +
                    std::to_string(a.width()) + " vs " +
                    std::to_string(b.width()) + ")");
}

}  // namespace

std::string BitVec::to_binary_string() const {
  std::string s(width_, '0');
  for (uint32_t i = 0; i < width_; ++i)
    if (bit(i)) s[width_ - 1 - i] = '1';
  return s;
}

BitVec bv_not(const BitVec& a) { return BitVec(a.width(), ~a.value()); }

BitVec bv_neg(const BitVec& a) { return BitVec(a.width(), ~a.value() + 1); }

BitVec bv_and(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvand");
  return BitVec(a.width(), a.value() & b.value());
}

BitVec bv_or(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvor");
  return BitVec(a.width(), a.value() | b.value());
}

BitVec bv_add(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvadd");
  return BitVec(a.width(), a.value() + b.value());
}

BitVec bv_sub(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvsub");
  return BitVec(a.width(), a.value() - b.value());
}

BitVec bv_mul(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvmul");
  return BitVec(a.width(), a.value() * b.value());
}

BitVec bv_udiv(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvudiv");
  if (b.is_zero()) return BitVec::ones(a.width());
  return BitVec(a.width(), a.value() / b.value());
}

BitVec bv_urem(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvurem");
  if (b.is_zero()) return a;
  return BitVec(a.width(), a.value() % b.value());
}

BitVec bv_shl(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvshl");
  if (b.value() >= a.width()) return BitVec::zero(a.width());
  return BitVec(a.width(), a.value() << b.value());
}

BitVec bv_lshr(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvlshr");
  if (b.value() >= a.width()) return BitVec::zero(a.width());
  return BitVec(a.width(), a.value() >> b.value());
}

BitVec bv_ashr(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvashr");
  if (b.value() >= a.width())
    return a.sign_bit() ? BitVec::ones(a.width()) : BitVec::zero(a.width());
  uint64_t shifted = a.value() >> b.value();
  if (a.sign_bit()) {
    uint64_t fill = a.mask() & ~(a.mask() >> b.value());
    shifted |= fill;
  }
  return BitVec(a.width(), shifted);
}

BitVec bv_concat(const BitVec& a, const BitVec& b) {
  if (a.width() + b.width() > kMaxWidth)
    throw SortError("concat: result width " +
                    std::to_string(a.width() + b.width()) + " exceeds " +
                    std::to_string(kMaxWidth));
  return BitVec(a.width() + b.width(), (a.value() << b.width()) | b.value());
}

BitVec bv_extract(const BitVec& a, uint32_t u, uint32_t l) {
  if (l > u || u >= a.width())
    throw SortError("extract: indices [" + std::to_string(u) + ":" +
                    std::to_string(l) + "] out of range for width " +
                    std::to_string(a.width()));
  return BitVec(u - l + 1, a.value() >> l);
}

bool bv_ult(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvult");
  return a.value() < b.value();
}

bool bv_ugt(const BitVec& a, const BitVec& b) { return bv_ult(b, a); }

bool bv_ule(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvule");
  return a.value() <= b.value();
}

bool bv_uge(const BitVec& a, const BitVec& b) { return bv_ule(b, a); }

bool bv_slt(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvslt");
  return a.signed_value() < b.signed_value();
}

bool bv_sgt(const BitVec& a, const BitVec& b) { return bv_slt(b, a); }

bool bv_sle(const BitVec& a, const BitVec& b) {
  check_same_width(a, b, "bvsle");
  return a.signed_value() <= b.signed_value();
}

bool bv_sge(const BitVec& a, const BitVec& b) { return bv_sle(b, a); }

BitVec bv_mul_inverse_odd(const BitVec& c) {
  if (!c.is_odd())
    throw PreconditionError("mul_inverse_odd: input " +
                            std::to_string(c.value()) + " is even");
  // Newton iteration x <- x * (2 - c*x) doubles the number of correct
  // low bits per step; x = c is already correct modulo 8.
  uint64_t x = c.value();
  for (int i = 0; i < 6; ++i) x *= 2 - c.value() * x;
  return BitVec(c.width(), x);
}

}  // namespace qbv
