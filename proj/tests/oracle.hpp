#pragma once

// Test-only oracles, kept independent of the library's evaluation paths.

#include "expdyn/hpcomplex.hpp"

namespace expdyn::oracle {

// exp by squaring-and-Taylor: halve x until |x| < 1/2, sum the series, then
// square back up. Deliberately avoids mpfr_exp.
inline HPReal taylor_exp(const HPReal& x, unsigned prec) {
  HPReal r(prec + 64);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  int halvings = 0;
  HPReal half(0.5, prec + 64);
  while (r.abs() > half) {
    r = r.mul_2exp(-1);
    ++halvings;
  }
  HPReal sum(1.0, prec + 64), term(1.0, prec + 64);
  for (long n = 1; n < 4 * static_cast<long>(prec); ++n) {
    term = term * r / HPReal(static_cast<double>(n), prec + 64);
    HPReal next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  for (int i = 0; i < halvings; ++i) sum = sum * sum;
  HPReal out(prec);
  mpfr_set(out.raw(), sum.raw(), MPFR_RNDN);
  return out;
}

// Newton iteration for the fixed point of f(z) = lambda e^z, i.e. a root of
// lambda e^z - z, independent of the library's inverse-branch path.
inline HPComplex newton_fixed_point(const HPComplex& lambda, HPComplex z,
                                    int iterations) {
  for (int i = 0; i < iterations; ++i) {
    HPComplex fz = lambda * hp_exp(z);
    HPComplex num = fz - z;  // g(z) = f(z) - z
    HPComplex den = fz - HPComplex(1.0, 0.0, z.precision());  // g'(z)
    z = z - div(num, den);
  }
  return z;
}

inline HPReal rel_err(const HPComplex& got, const HPComplex& want) {
  HPReal scale = want.abs();
  if (scale.is_zero()) return (got - want).abs();
  return (got - want).abs() / scale;
}

inline HPReal rel_err(const HPReal& got, const HPReal& want) {
  HPReal scale = want.abs();
  if (scale.is_zero()) return (got - want).abs();
  return (got - want).abs() / scale;
}

}  // namespace expdyn::oracle
