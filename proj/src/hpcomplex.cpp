#include "expdyn/hpcomplex.hpp"

namespace expdyn {

HPComplex div(const HPComplex& a, const HPComplex& b) {
  HPReal d = b.re() * b.re() + b.im() * b.im();
  if (d.is_zero()) throw InvalidArgument("complex division by zero");
  return {(a.re() * b.re() + a.im() * b.im()) / d,
          (a.im() * b.re() - a.re() * b.im()) / d,
          std::min(a.max_exponent_bits(), b.max_exponent_bits())};
}

HPComplex hp_exp(const HPComplex& z) {
  const unsigned prec = z.precision();
  // |e^z| = e^Re(z); the result needs about Re(z)*log2(e) exponent bits.
  double needed = z.re().to_double() * 1.4426950408889634;
  if (needed > static_cast<double>(z.max_exponent_bits()))
    throw ExponentBudgetExceeded(needed,
                                 static_cast<double>(z.max_exponent_bits()));

  HPReal mag = z.re().exp();
  HPReal reduced(prec + 32);
  {
    HPReal twopi = HPReal::two_pi(prec + 32);
    HPReal im_wide(prec + 32);
    mpfr_set(im_wide.raw(), z.im().raw(), MPFR_RNDN);
    reduced = im_wide.remainder(twopi);
  }
  HPReal c(prec), s(prec);
  mpfr_sin_cos(s.raw(), c.raw(), reduced.raw(), MPFR_RNDN);
  return {mag * c, mag * s, z.max_exponent_bits()};
}

HPComplex hp_log(const HPComplex& z) {
  if (z.is_zero()) throw InvalidArgument("log of zero");
  return {z.abs().log(), z.arg(), z.max_exponent_bits()};
}

HPReal distance(const HPComplex& a, const HPComplex& b) {
  return (a - b).abs();
}

}  // namespace expdyn
