#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "expdyn/errors.hpp"

namespace expdyn {

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;
inline constexpr uint64_t kDefaultMaxExponentBits = uint64_t(1) << 20;

// Arbitrary-precision real backed by MPFR. Values are immutable in spirit:
// every operation returns a fresh value, so parallel readers are safe.
// Binary operations round at the wider of the two operand precisions.
class HPReal {
 public:
  explicit HPReal(unsigned prec = kDefaultPrecisionBits);
  HPReal(double x, unsigned prec = kDefaultPrecisionBits);
  HPReal(long x, unsigned prec);
  HPReal(const HPReal& o);
  HPReal(HPReal&& o) noexcept;
  HPReal& operator=(const HPReal& o);
  HPReal& operator=(HPReal&& o) noexcept;
  ~HPReal();

  static HPReal from_decimal(std::string_view dec,
                             unsigned prec = kDefaultPrecisionBits);
  // Enough digits that parsing the string back reproduces the exact bits.
  std::string to_decimal() const;
  std::string to_decimal(int digits) const;

  unsigned precision() const { return prec_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_negative() const { return mpfr_sgn(v_) < 0; }
  int sign() const { return mpfr_sgn(v_); }
  // log2-magnitude estimate; 0 for zero.
  long exponent2() const { return is_zero() ? 0 : mpfr_get_exp(v_); }

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);
  HPReal operator-() const;

  friend bool operator<(const HPReal& a, const HPReal& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator>(const HPReal& a, const HPReal& b) { return b < a; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return !(b < a); }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return !(a < b); }
  friend bool operator==(const HPReal& a, const HPReal& b) {
    return mpfr_cmp(a.v_, b.v_) == 0;
  }
  friend bool operator!=(const HPReal& a, const HPReal& b) {
    return !(a == b);
  }

  HPReal abs() const;
  HPReal exp() const;
  HPReal log() const;
  HPReal sqrt() const;
  HPReal sin() const;
  HPReal cos() const;
  HPReal floor() const;
  HPReal round() const;
  // Nearest-integer remainder: result in [-y/2, y/2].
  HPReal remainder(const HPReal& y) const;
  HPReal mul_2exp(long e) const;  // exact scaling by 2^e

  static HPReal pi(unsigned prec);
  static HPReal two_pi(unsigned prec);
  static HPReal atan2(const HPReal& y, const HPReal& x);
  static HPReal hypot(const HPReal& x, const HPReal& y);
  static HPReal pow2(long e, unsigned prec);  // 2^e
  static HPReal max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }
  static HPReal min(const HPReal& a, const HPReal& b) { return a < b ? a : b; }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
  unsigned prec_;
};

}  // namespace expdyn
