#pragma once

#include <cstdint>
#include <string>

#include "qbv/errors.hpp"

namespace qbv {

inline constexpr uint32_t kMaxWidth = 64;

// Fixed-width bit-vector value with SMT-LIB 2 operator semantics.
// Widths range over 1..64; the stored value is always masked to the width.
class BitVec {
 public:
  BitVec() : width_(1), value_(0) {}
  BitVec(uint32_t width, uint64_t value) : width_(check_width(width)) {
    value_ = value & mask();
  }

  uint32_t width() const { return width_; }
  uint64_t value() const { return value_; }

  uint64_t mask() const { return mask_of(width_); }

  // Two's-complement reading of the stored bits.
  int64_t signed_value() const {
    if (sign_bit()) return static_cast<int64_t>(value_ | ~mask());
    return static_cast<int64_t>(value_);
  }

  bool bit(uint32_t i) const { return (value_ >> i) & 1; }
  bool sign_bit() const { return bit(width_ - 1); }

  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_ones() const { return value_ == mask(); }
  bool is_odd() const { return value_ & 1; }
  bool is_min_signed() const { return value_ == (uint64_t{1} << (width_ - 1)); }
  bool is_max_signed() const { return value_ == mask() >> 1; }

  static uint64_t mask_of(uint32_t width) {
    return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
  }

  static BitVec zero(uint32_t w) { return BitVec(w, 0); }
  static BitVec one(uint32_t w) { return BitVec(w, 1); }
  static BitVec ones(uint32_t w) { return BitVec(w, mask_of(w)); }
  static BitVec min_signed(uint32_t w) {
    return BitVec(w, uint64_t{1} << (w - 1));
  }
  static BitVec max_signed(uint32_t w) { return BitVec(w, mask_of(w) >> 1); }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.width_ == b.width_ && a.value_ == b.value_;
  }
  friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }

  // Bit string, most significant bit first, e.g. "0101".
  std::string to_binary_string() const;

 private:
  static uint32_t check_width(uint32_t w) {
    if (w < 1 || w > kMaxWidth)
      throw SortError("bit-vector width " + std::to_string(w) +
                      " outside supported range 1.." +
                      std::to_string(kMaxWidth));
    return w;
  }

  uint32_t width_;
  uint64_t value_;
};

// Unary operators.
BitVec bv_not(const BitVec& a);
BitVec bv_neg(const BitVec& a);

// Binary operators; both arguments must have equal width.
BitVec bv_and(const BitVec& a, const BitVec& b);
BitVec bv_or(const BitVec& a, const BitVec& b);
BitVec bv_add(const BitVec& a, const BitVec& b);
BitVec bv_sub(const BitVec& a, const BitVec& b);
BitVec bv_mul(const BitVec& a, const BitVec& b);
// Total division: udiv by zero yields all ones, urem by zero the dividend.
BitVec bv_udiv(const BitVec& a, const BitVec& b);
BitVec bv_urem(const BitVec& a, const BitVec& b);
// Shift amounts are compared as full unsigned values; amounts >= width
// yield zero (shl, lshr) or sign fill (ashr).
BitVec bv_shl(const BitVec& a, const BitVec& b);
BitVec bv_lshr(const BitVec& a, const BitVec& b);
BitVec bv_ashr(const BitVec& a, const BitVec& b);

// a occupies the high bits of the result; widths must sum to <= 64.
BitVec bv_concat(const BitVec& a, const BitVec& b);
// Bits u..l inclusive, 0 <= l <= u < width.
BitVec bv_extract(const BitVec& a, uint32_t u, uint32_t l);

bool bv_ult(const BitVec& a, const BitVec& b);
bool bv_ugt(const BitVec& a, const BitVec& b);
bool bv_ule(const BitVec& a, const BitVec& b);
bool bv_uge(const BitVec& a, const BitVec& b);
bool bv_slt(const BitVec& a, const BitVec& b);
bool bv_sgt(const BitVec& a, const BitVec& b);
bool bv_sle(const BitVec& a, const BitVec& b);
bool bv_sge(const BitVec& a, const BitVec& b);

// Multiplicative inverse of an odd value modulo 2^width.
BitVec bv_mul_inverse_odd(const BitVec& c);

}  // namespace qbv
