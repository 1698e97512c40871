#include "expdyn/hpreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace expdyn {

namespace {
unsigned checked_prec(unsigned prec) {
  if (prec < kMinPrecisionBits)
    throw InvalidArgument("precision_bits must be >= 64");
  return prec;
}
}  // namespace

HPReal::HPReal(unsigned prec) : prec_(checked_prec(prec)) {
  mpfr_init2(v_, prec_);
  mpfr_set_zero(v_, 1);
}

HPReal::HPReal(double x, unsigned prec) : prec_(checked_prec(prec)) {
  mpfr_init2(v_, prec_);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

HPReal::HPReal(long x, unsigned prec) : prec_(checked_prec(prec)) {
  mpfr_init2(v_, prec_);
  mpfr_set_si(v_, x, MPFR_RNDN);
}

HPReal::HPReal(const HPReal& o) : prec_(o.prec_) {
  mpfr_init2(v_, prec_);
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

HPReal::HPReal(HPReal&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(v_, prec_);
  mpfr_swap(v_, o.v_);
}

HPReal& HPReal::operator=(const HPReal& o) {
  if (this != &o) {
    if (prec_ != o.prec_) {
      mpfr_set_prec(v_, o.prec_);
      prec_ = o.prec_;
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& o) noexcept {
  if (this != &o) {
    mpfr_swap(v_, o.v_);
    std::swap(prec_, o.prec_);
  }
  return *this;
}

HPReal::~HPReal() { mpfr_clear(v_); }

HPReal HPReal::from_decimal(std::string_view dec, unsigned prec) {
  HPReal r(prec);
  std::string s(dec);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw InvalidArgument("not a decimal number: '" + s + "'");
  return r;
}

std::string HPReal::to_decimal() const {
  // ceil(1 + prec*log10(2)) digits guarantee an exact binary round-trip.
  int digits = static_cast<int>(prec_ * 0.3010299956639812) + 3;
  return to_decimal(digits);
}

std::string HPReal::to_decimal(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

#define EXPDYN_BINOP(op, fn)                                   \
  HPReal operator op(const HPReal& a, const HPReal& b) {       \
    HPReal r(std::max(a.prec_, b.prec_));                      \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                           \
    return r;                                                  \
  }

EXPDYN_BINOP(+, mpfr_add)
EXPDYN_BINOP(-, mpfr_sub)
EXPDYN_BINOP(*, mpfr_mul)
EXPDYN_BINOP(/, mpfr_div)
#undef EXPDYN_BINOP

HPReal HPReal::operator-() const {
  HPReal r(prec_);
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define EXPDYN_UNOP(name, fn)       \
  HPReal HPReal::name() const {     \
    HPReal r(prec_);                \
    fn(r.v_, v_, MPFR_RNDN);        \
    return r;                       \
  }

EXPDYN_UNOP(abs, mpfr_abs)
EXPDYN_UNOP(exp, mpfr_exp)
EXPDYN_UNOP(log, mpfr_log)
EXPDYN_UNOP(sqrt, mpfr_sqrt)
EXPDYN_UNOP(sin, mpfr_sin)
EXPDYN_UNOP(cos, mpfr_cos)
#undef EXPDYN_UNOP

HPReal HPReal::floor() const {
  HPReal r(prec_);
  mpfr_floor(r.v_, v_);
  return r;
}

HPReal HPReal::round() const {
  HPReal r(prec_);
  mpfr_round(r.v_, v_);
  return r;
}

HPReal HPReal::remainder(const HPReal& y) const {
  HPReal r(std::max(prec_, y.prec_));
  mpfr_remainder(r.v_, v_, y.v_, MPFR_RNDN);
  return r;
}

HPReal HPReal::mul_2exp(long e) const {
  HPReal r(prec_);
  if (e >= 0)
    mpfr_mul_2ui(r.v_, v_, static_cast<unsigned long>(e), MPFR_RNDN);
  else
    mpfr_div_2ui(r.v_, v_, static_cast<unsigned long>(-e), MPFR_RNDN);
  return r;
}

HPReal HPReal::pi(unsigned prec) {
  HPReal r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

HPReal HPReal::two_pi(unsigned prec) {
  HPReal r = pi(prec);
  mpfr_mul_2ui(r.v_, r.v_, 1, MPFR_RNDN);
  return r;
}

HPReal HPReal::atan2(const HPReal& y, const HPReal& x) {
  HPReal r(std::max(y.prec_, x.prec_));
  mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
  return r;
}

HPReal HPReal::hypot(const HPReal& x, const HPReal& y) {
  HPReal r(std::max(x.prec_, y.prec_));
  mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

HPReal HPReal::pow2(long e, unsigned prec) {
  HPReal r(1.0, prec);
  return r.mul_2exp(e);
}

}  // namespace expdyn
