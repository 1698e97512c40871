#pragma once

#include <string>

#include "expdyn/hpreal.hpp"

namespace expdyn {

// High-precision complex value with an explicit exponent budget. The budget
// caps the magnitude hp_exp may produce: Re(z)*log2(e) must stay within it.
// Values are immutable after construction; all operations are pure.
class HPComplex {
 public:
  HPComplex() : re_(kDefaultPrecisionBits), im_(kDefaultPrecisionBits) {}
  HPComplex(HPReal re, HPReal im,
            uint64_t max_exponent_bits = kDefaultMaxExponentBits)
      : re_(std::move(re)), im_(std::move(im)), budget_(max_exponent_bits) {}
  HPComplex(double re, double im, unsigned prec = kDefaultPrecisionBits,
            uint64_t max_exponent_bits = kDefaultMaxExponentBits)
      : re_(re, prec), im_(im, prec), budget_(max_exponent_bits) {}

  const HPReal& re() const { return re_; }
  const HPReal& im() const { return im_; }
  unsigned precision() const {
    return std::max(re_.precision(), im_.precision());
  }
  uint64_t max_exponent_bits() const { return budget_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  friend HPComplex operator+(const HPComplex& a, const HPComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_, std::min(a.budget_, b.budget_)};
  }
  friend HPComplex operator-(const HPComplex& a, const HPComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_, std::min(a.budget_, b.budget_)};
  }
  friend HPComplex operator*(const HPComplex& a, const HPComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_,
            std::min(a.budget_, b.budget_)};
  }
  HPComplex operator-() const { return {-re_, -im_, budget_}; }

  HPComplex conj() const { return {re_, -im_, budget_}; }
  HPReal abs() const { return HPReal::hypot(re_, im_); }
  // Principal argument in (-pi, pi].
  HPReal arg() const { return HPReal::atan2(im_, re_); }

  std::string str(int digits = 17) const {
    return re_.to_decimal(digits) + (im_.is_negative() ? "" : "+") +
           im_.to_decimal(digits) + "i";
  }

 private:
  HPReal re_, im_;
  uint64_t budget_ = kDefaultMaxExponentBits;
};

HPComplex div(const HPComplex& a, const HPComplex& b);

// e^z. Throws ExponentBudgetExceeded if Re(z)*log2(e) exceeds the budget.
// Im(z) is reduced modulo 2pi at working precision + 32 guard bits before
// the sin/cos evaluation.
HPComplex hp_exp(const HPComplex& z);

// Principal branch: log|z| + i*arg(z), arg in (-pi, pi].
HPComplex hp_log(const HPComplex& z);

HPReal distance(const HPComplex& a, const HPComplex& b);

}  // namespace expdyn
