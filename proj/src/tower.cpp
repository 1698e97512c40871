#include "expdyn/tower.hpp"

#include <cmath>

namespace expdyn {

namespace {
// Internal materialization cap for exact add/mul: values up to 2^(2^16).
constexpr uint64_t kExactOpBits = uint64_t(1) << 16;

HPReal euler_e(unsigned prec) {
  return HPReal(1.0, prec).exp();
}
}  // namespace

TowerMagnitude::TowerMagnitude(long level, HPReal mantissa)
    : level_(level), mantissa_(std::move(mantissa)) {
  if (level_ < 0) throw InvalidArgument("tower level must be >= 0");
  const unsigned prec = mantissa_.precision();
  HPReal e = euler_e(prec);
  while (mantissa_ >= e) {
    mantissa_ = mantissa_.log();
    ++level_;
  }
  while (level_ >= 1 && mantissa_ < HPReal(1.0, prec)) {
    mantissa_ = mantissa_.exp();
    --level_;
  }
}

int TowerMagnitude::compare(const TowerMagnitude& a, const TowerMagnitude& b) {
  if (a.level_ != b.level_) return a.level_ < b.level_ ? -1 : 1;
  if (a.mantissa_ < b.mantissa_) return -1;
  if (b.mantissa_ < a.mantissa_) return 1;
  return 0;
}

std::string TowerMagnitude::str() const {
  return "exp^" + std::to_string(level_) + "(" + mantissa_.to_decimal(20) +
         ")";
}

TowerMagnitude tower_from_real(const HPReal& x) {
  return TowerMagnitude(0, x);
}

TowerMagnitude tower_exp(const TowerMagnitude& m) {
  if (m.level() >= 1) return TowerMagnitude(m.level() + 1, m.mantissa());
  const unsigned prec = m.mantissa().precision();
  if (m.mantissa() >= HPReal(1.0, prec))
    return TowerMagnitude(1, m.mantissa());
  return TowerMagnitude(0, m.mantissa().exp());
}

bool tower_representable(const TowerMagnitude& m, uint64_t max_exponent_bits) {
  HPReal x = m.mantissa();
  const double log2e = 1.4426950408889634;
  for (long l = 0; l < m.level(); ++l) {
    double bits = x.to_double() * log2e;
    if (bits > static_cast<double>(max_exponent_bits)) return false;
    // One more exp would overflow a double's view of the bit count.
    if (bits > 1e15) return false;
    x = x.exp();
  }
  return true;
}

HPReal tower_to_real(const TowerMagnitude& m, unsigned prec,
                     uint64_t max_exponent_bits) {
  HPReal x(prec);
  mpfr_set(x.raw(), m.mantissa().raw(), MPFR_RNDN);
  const double log2e = 1.4426950408889634;
  for (long l = 0; l < m.level(); ++l) {
    double bits = x.to_double() * log2e;
    if (bits > static_cast<double>(max_exponent_bits))
      throw ExponentBudgetExceeded(bits,
                                   static_cast<double>(max_exponent_bits));
    x = x.exp();
  }
  return x;
}

namespace {
bool materializable(const TowerMagnitude& m) {
  return tower_representable(m, kExactOpBits);
}
}  // namespace

TowerMagnitude tower_add(const TowerMagnitude& a, const TowerMagnitude& b) {
  if (materializable(a) && materializable(b)) {
    unsigned prec = std::max(a.mantissa().precision(), b.mantissa().precision());
    return tower_from_real(tower_to_real(a, prec, kExactOpBits) +
                           tower_to_real(b, prec, kExactOpBits));
  }
  // Dominant term. The smaller operand is at least one full exp-level (or
  // a 2^16-bit magnitude gap) below, so it cannot shift the result by a
  // representable amount at the mantissa's precision.
  return TowerMagnitude::compare(a, b) >= 0 ? a : b;
}

TowerMagnitude tower_mul(const TowerMagnitude& a, const TowerMagnitude& b) {
  if (materializable(a) && materializable(b)) {
    unsigned prec = std::max(a.mantissa().precision(), b.mantissa().precision());
    return tower_from_real(tower_to_real(a, prec, kExactOpBits) *
                           tower_to_real(b, prec, kExactOpBits));
  }
  auto tower_log = [](const TowerMagnitude& m) -> TowerMagnitude {
    if (m.level() >= 1) return TowerMagnitude(m.level() - 1, m.mantissa());
    if (m.mantissa().sign() <= 0)
      throw InvalidArgument("tower_mul needs positive magnitudes");
    return tower_from_real(m.mantissa().log());
  };
  return tower_exp(tower_add(tower_log(a), tower_log(b)));
}

}  // namespace expdyn
